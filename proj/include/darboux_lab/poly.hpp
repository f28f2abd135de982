#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "darboux_lab/rational.hpp"

namespace dlab {

class VariableMismatch : public Error {
 public:
  using Error::Error;
};

// Ordered, shared list of variable names. Polynomials over the same VarList
// can be combined; two VarLists are equal when their names are.
class VarList {
 public:
  VarList() : names_(std::make_shared<const std::vector<std::string>>()) {}
  explicit VarList(std::vector<std::string> names);

  std::size_t size() const { return names_->size(); }
  const std::string& operator[](std::size_t i) const { return (*names_)[i]; }
  const std::vector<std::string>& names() const { return *names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  VarList without(std::size_t index) const;
  VarList with_appended(std::string name) const;

  friend bool operator==(const VarList& a, const VarList& b) {
    return a.names_ == b.names_ || *a.names_ == *b.names_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
};

// Exponent vector over an ambient VarList. Ordered graded-lexicographically:
// higher total degree first, ties broken by comparing exponents of the first
// variable, then the second, and so on.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  explicit Monomial(std::vector<std::uint32_t> exps) : exps_(std::move(exps)) {}

  static Monomial variable(std::size_t nvars, std::size_t index, std::uint32_t power = 1);

  std::size_t size() const { return exps_.size(); }
  std::uint32_t operator[](std::size_t i) const { return exps_[i]; }
  std::uint32_t& operator[](std::size_t i) { return exps_[i]; }
  const std::vector<std::uint32_t>& exponents() const { return exps_; }
  std::uint32_t degree() const;
  bool is_one() const { return degree() == 0; }

  bool divides(const Monomial& other) const;
  // Requires divides(other).
  Monomial quotient_of(const Monomial& other) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial&, const Monomial&) = default;
  // Graded-lex order: a > b means a comes first in canonical printing.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);

 private:
  std::vector<std::uint32_t> exps_;
};

// All monomials in nvars variables of total degree exactly `degree`, in
// descending graded-lex order.
std::vector<Monomial> monomials_of_degree(std::size_t nvars, std::uint32_t degree);
// All monomials of total degree <= `max_degree`, descending graded-lex order.
std::vector<Monomial> monomials_up_to(std::size_t nvars, std::uint32_t max_degree);

struct Term {
  Monomial monomial;
  Rational coef;
  friend bool operator==(const Term&, const Term&) = default;
};

struct Division;

// Sparse multivariate polynomial with exact rational coefficients.
// Terms are kept in descending graded-lex order with no zero coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(VarList vars) : vars_(std::move(vars)) {}
  // Takes arbitrary terms; merges duplicates and drops zeros.
  Poly(VarList vars, std::vector<Term> terms);

  static Poly constant(const VarList& vars, const Rational& c);
  static Poly variable(const VarList& vars, std::size_t index);
  static Poly variable(const VarList& vars, std::string_view name);
  static Poly monomial(const VarList& vars, Monomial m, Rational c = 1);

  const VarList& vars() const { return vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one()); }
  // -1 for the zero polynomial.
  int degree() const { return terms_.empty() ? -1 : static_cast<int>(terms_.front().monomial.degree()); }
  int degree_in(std::size_t var) const;
  bool involves(std::size_t var) const { return degree_in(var) > 0; }
  const Term& leading_term() const { return terms_.front(); }
  Rational coefficient(const Monomial& m) const;

  Poly homogeneous_part(std::uint32_t degree) const;
  Poly derivative(std::size_t var) const;
  // Sets variable `var` to zero; the result stays over the same VarList.
  Poly set_zero(std::size_t var) const;
  // Re-expresses the polynomial over `target`, which must contain every
  // variable that actually occurs.
  Poly rebase(const VarList& target) const;
  // Leading coefficient scaled to 1 (zero stays zero).
  Poly monic() const;
  Poly pow(unsigned e) const;

  Rational evaluate(std::span<const Rational> point) const;

  // Canonical text form, e.g. "2*x^2 - x*y + 1/2".
  std::string str() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rational& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.terms_ == b.terms_ && a.vars_ == b.vars_;
  }

 private:
  void check_same_vars(const Poly& o) const;

  VarList vars_;
  std::vector<Term> terms_;
};

// Deterministic total order used for canonical result listings: lower total
// degree first, then term by term (greater monomial first, then smaller
// coefficient).
bool canonical_less(const Poly& a, const Poly& b);

struct Division {
  Poly quotient;
  Poly remainder;
  bool exact() const { return remainder.is_zero(); }
};

// Multivariate division by a single divisor with graded-lex leading-term
// reduction. The remainder is zero exactly when `den` divides `num`.
Division divide(const Poly& num, const Poly& den);
// Quotient when the division is exact.
std::optional<Poly> exact_quotient(const Poly& num, const Poly& den);

// Largest monomial dividing every term (1 for the zero polynomial).
Monomial monomial_content(const Poly& p);

}  // namespace dlab
