#include "darboux_lab/matrix.hpp"

#include <utility>

namespace dlab {

RatMatrix RatMatrix::from_rows(const std::vector<RatVector>& rows, std::size_t cols) {
  RatMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw Error("row length does not match column count");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

RatVector RatMatrix::row(std::size_t r) const {
  return RatVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

RatVector RatMatrix::apply(const RatVector& v) const {
  if (v.size() != cols_) throw Error("vector length does not match column count");
  RatVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (!(*this)(r, c).is_zero() && !v[c].is_zero()) out[r] += (*this)(r, c) * v[c];
  return out;
}

Echelon rref(RatMatrix m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  std::vector<std::size_t> nz;  // nonzero columns of the pivot row
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m(p, c).is_zero()) ++p;
    if (p == rows) continue;
    if (p != r)
      for (std::size_t k = c; k < cols; ++k) std::swap(m(p, k), m(r, k));
    const Rational inv = m(r, c).inverse();
    nz.clear();
    for (std::size_t k = c; k < cols; ++k) {
      if (m(r, k).is_zero()) continue;
      m(r, k) *= inv;
      nz.push_back(k);
    }
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const Rational f = m(i, c);
      for (std::size_t k : nz) m(i, k).sub_mul(f, m(r, k));
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

std::size_t rank(const RatMatrix& m) { return rref(m).rank(); }

std::vector<RatVector> nullspace(const RatMatrix& m) {
  const Echelon e = rref(m);
  const std::size_t cols = m.cols();
  std::vector<bool> is_pivot(cols, false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<RatVector> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RatVector v(cols);
    v[free] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
      const Rational& a = e.reduced(i, free);
      if (!a.is_zero()) v[e.pivots[i]] = -a;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<RatVector> span_basis(const std::vector<RatVector>& vectors, std::size_t dim) {
  if (vectors.empty()) return {};
  const Echelon e = rref(RatMatrix::from_rows(vectors, dim));
  std::vector<RatVector> out;
  out.reserve(e.rank());
  for (std::size_t i = 0; i < e.rank(); ++i) out.push_back(e.reduced.row(i));
  return out;
}

std::vector<RatVector> quotient_basis(const std::vector<RatVector>& space,
                                      const std::vector<RatVector>& sub, std::size_t dim) {
  const auto sub_basis = span_basis(sub, dim);
  std::vector<std::size_t> sub_pivots;
  for (const auto& v : sub_basis) {
    std::size_t c = 0;
    while (v[c].is_zero()) ++c;
    sub_pivots.push_back(c);
  }
  std::vector<RatVector> reduced;
  for (RatVector v : space) {
    for (std::size_t i = 0; i < sub_basis.size(); ++i) {
      const Rational f = v[sub_pivots[i]];
      if (f.is_zero()) continue;
      for (std::size_t k = 0; k < dim; ++k)
        if (!sub_basis[i][k].is_zero()) v[k].sub_mul(f, sub_basis[i][k]);
    }
    reduced.push_back(std::move(v));
  }
  return span_basis(reduced, dim);
}

RatVector primitive_integer(const RatVector& v) {
  mpz_class den = 1;
  for (const auto& x : v)
    if (!x.is_zero()) den = lcm(den, x.denominator());
  mpz_class g = 0;
  for (const auto& x : v)
    if (!x.is_zero()) g = gcd(g, x.numerator() * (den / x.denominator()));
  if (g == 0) return v;
  RatVector out;
  out.reserve(v.size());
  const Rational scale(den, g);
  for (const auto& x : v) out.push_back(x * scale);
  for (const auto& x : out) {
    if (x.is_zero()) continue;
    if (x.sign() < 0)
      for (auto& y : out) y = -y;
    break;
  }
  return out;
}

}  // namespace dlab
