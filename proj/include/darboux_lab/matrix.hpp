#pragma once

#include <cstddef>
#include <vector>

#include "darboux_lab/rational.hpp"

namespace dlab {

using RatVector = std::vector<Rational>;

// Dense row-major matrix of exact rationals.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static RatMatrix from_rows(const std::vector<RatVector>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RatVector row(std::size_t r) const;
  RatVector apply(const RatVector& v) const;

  friend bool operator==(const RatMatrix&, const RatMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

struct Echelon {
  RatMatrix reduced;                // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row, increasing
  std::size_t rank() const { return pivots.size(); }
};

// Gauss-Jordan elimination; the pivot in each column is the first nonzero
// entry at or below the current row.
Echelon rref(RatMatrix m);

std::size_t rank(const RatMatrix& m);

// Kernel basis: one vector per non-pivot column, in increasing column order,
// with a 1 in that column. Empty iff the kernel is trivial.
std::vector<RatVector> nullspace(const RatMatrix& m);

// Canonical basis of the span of `vectors` (the nonzero rows of their RREF).
std::vector<RatVector> span_basis(const std::vector<RatVector>& vectors, std::size_t dim);

// Basis of a complement of span(sub) inside span(space), in canonical form:
// the result vectors vanish on the pivot columns of span(sub).
std::vector<RatVector> quotient_basis(const std::vector<RatVector>& space,
                                      const std::vector<RatVector>& sub, std::size_t dim);

// Scales v by a positive rational so its entries are coprime integers.
RatVector primitive_integer(const RatVector& v);

}  // namespace dlab
