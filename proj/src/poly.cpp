#include "darboux_lab/poly.hpp"

#include <algorithm>
#include <numeric>

namespace dlab {

// ---------------------------------------------------------------- VarList

VarList::VarList(std::vector<std::string> names)
    : names_(std::make_shared<const std::vector<std::string>>(std::move(names))) {}

std::optional<std::size_t> VarList::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_->size(); ++i)
    if ((*names_)[i] == name) return i;
  return std::nullopt;
}

VarList VarList::without(std::size_t index) const {
  std::vector<std::string> n = *names_;
  n.erase(n.begin() + static_cast<std::ptrdiff_t>(index));
  return VarList(std::move(n));
}

VarList VarList::with_appended(std::string name) const {
  std::vector<std::string> n = *names_;
  n.push_back(std::move(name));
  return VarList(std::move(n));
}

// --------------------------------------------------------------- Monomial

Monomial Monomial::variable(std::size_t nvars, std::size_t index, std::uint32_t power) {
  Monomial m(nvars);
  m.exps_[index] = power;
  return m;
}

std::uint32_t Monomial::degree() const {
  return std::accumulate(exps_.begin(), exps_.end(), std::uint32_t{0});
}

bool Monomial::divides(const Monomial& other) const {
  for (std::size_t i = 0; i < exps_.size(); ++i)
    if (exps_[i] > other.exps_[i]) return false;
  return true;
}

Monomial Monomial::quotient_of(const Monomial& other) const {
  Monomial q(exps_.size());
  for (std::size_t i = 0; i < exps_.size(); ++i) q.exps_[i] = other.exps_[i] - exps_[i];
  return q;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r(a.exps_.size());
  for (std::size_t i = 0; i < a.exps_.size(); ++i) r.exps_[i] = a.exps_[i] + b.exps_[i];
  return r;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  const auto da = a.degree();
  const auto db = b.degree();
  if (da != db) return da <=> db;
  for (std::size_t i = 0; i < a.exps_.size(); ++i)
    if (a.exps_[i] != b.exps_[i]) return a.exps_[i] <=> b.exps_[i];
  return std::strong_ordering::equal;
}

namespace {

void fill_degree(std::size_t var, std::uint32_t remaining, Monomial& cur, std::vector<Monomial>& out) {
  const std::size_t n = cur.size();
  if (var + 1 == n) {
    cur[var] = remaining;
    out.push_back(cur);
    return;
  }
  for (std::uint32_t e = remaining + 1; e-- > 0;) {
    cur[var] = e;
    fill_degree(var + 1, remaining - e, cur, out);
  }
  cur[var] = 0;
}

}  // namespace

std::vector<Monomial> monomials_of_degree(std::size_t nvars, std::uint32_t degree) {
  std::vector<Monomial> out;
  if (nvars == 0) {
    if (degree == 0) out.emplace_back(0);
    return out;
  }
  Monomial cur(nvars);
  fill_degree(0, degree, cur, out);
  return out;
}

std::vector<Monomial> monomials_up_to(std::size_t nvars, std::uint32_t max_degree) {
  std::vector<Monomial> out;
  for (std::uint32_t d = max_degree + 1; d-- > 0;) {
    auto layer = monomials_of_degree(nvars, d);
    out.insert(out.end(), std::make_move_iterator(layer.begin()), std::make_move_iterator(layer.end()));
  }
  return out;
}

// ------------------------------------------------------------------- Poly

namespace {

// Sorts descending and merges equal monomials, dropping zeros.
std::vector<Term> normalize(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.monomial > b.monomial; });
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().monomial == t.monomial) {
      out.back().coef += t.coef;
    } else {
      if (!out.empty() && out.back().coef.is_zero()) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coef.is_zero()) out.pop_back();
  return out;
}

}  // namespace

Poly::Poly(VarList vars, std::vector<Term> terms) : vars_(std::move(vars)) {
  for (const auto& t : terms)
    if (t.monomial.size() != vars_.size()) throw VariableMismatch("monomial arity does not match variables");
  terms_ = normalize(std::move(terms));
}

Poly Poly::constant(const VarList& vars, const Rational& c) {
  Poly p(vars);
  if (!c.is_zero()) p.terms_.push_back({Monomial(vars.size()), c});
  return p;
}

Poly Poly::variable(const VarList& vars, std::size_t index) {
  Poly p(vars);
  p.terms_.push_back({Monomial::variable(vars.size(), index), Rational(1)});
  return p;
}

Poly Poly::variable(const VarList& vars, std::string_view name) {
  const auto idx = vars.index_of(name);
  if (!idx) throw VariableMismatch("unknown variable '" + std::string(name) + "'");
  return variable(vars, *idx);
}

Poly Poly::monomial(const VarList& vars, Monomial m, Rational c) {
  if (m.size() != vars.size()) throw VariableMismatch("monomial arity does not match variables");
  Poly p(vars);
  if (!c.is_zero()) p.terms_.push_back({std::move(m), std::move(c)});
  return p;
}

int Poly::degree_in(std::size_t var) const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& t : terms_) d = std::max(d, static_cast<int>(t.monomial[var]));
  return d;
}

Rational Poly::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& key) { return t.monomial > key; });
  if (it != terms_.end() && it->monomial == m) return it->coef;
  return Rational(0);
}

Poly Poly::homogeneous_part(std::uint32_t degree) const {
  Poly p(vars_);
  for (const auto& t : terms_)
    if (t.monomial.degree() == degree) p.terms_.push_back(t);
  return p;
}

Poly Poly::derivative(std::size_t var) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    const auto e = t.monomial[var];
    if (e == 0) continue;
    Monomial m = t.monomial;
    m[var] = e - 1;
    out.push_back({std::move(m), t.coef * Rational(static_cast<long>(e))});
  }
  // Differentiation can reorder terms (e.g. x^2 vs x*y after d/dx).
  return Poly(vars_, std::move(out));
}

Poly Poly::set_zero(std::size_t var) const {
  Poly p(vars_);
  for (const auto& t : terms_)
    if (t.monomial[var] == 0) p.terms_.push_back(t);
  return p;
}

Poly Poly::rebase(const VarList& target) const {
  if (target == vars_) return *this;
  std::vector<std::size_t> map(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    const auto idx = target.index_of(vars_[i]);
    if (idx) {
      map[i] = *idx;
    } else {
      if (involves(i)) throw VariableMismatch("variable '" + vars_[i] + "' is not in the target variable list");
      map[i] = target.size();
    }
  }
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Monomial m(target.size());
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (map[i] < target.size()) m[map[i]] = t.monomial[i];
    out.push_back({std::move(m), t.coef});
  }
  return Poly(target, std::move(out));
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return *this * terms_.front().coef.inverse();
}

Poly Poly::pow(unsigned e) const {
  Poly result = constant(vars_, 1);
  Poly base = *this;
  while (e) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e) base = base * base;
  }
  return result;
}

Rational Poly::evaluate(std::span<const Rational> point) const {
  if (point.size() != vars_.size()) throw VariableMismatch("evaluation point has wrong dimension");
  Rational acc(0);
  for (const auto& t : terms_) {
    Rational v = t.coef;
    for (std::size_t i = 0; i < point.size(); ++i)
      for (std::uint32_t k = 0; k < t.monomial[i]; ++k) v *= point[i];
    acc += v;
  }
  return acc;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms_) {
    const bool negative = t.coef.sign() < 0;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    const Rational mag = t.coef.abs();
    std::string mono;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      const auto e = t.monomial[i];
      if (e == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars_[i];
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty()) {
      out += mag.str();
    } else if (mag.is_one()) {
      out += mono;
    } else {
      out += mag.str() + "*" + mono;
    }
  }
  return out;
}

void Poly::check_same_vars(const Poly& o) const {
  if (!(vars_ == o.vars_)) throw VariableMismatch("polynomials are over different variable sets");
}

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& t : p.terms_) t.coef = -t.coef;
  return p;
}

namespace {

template <bool Subtract>
std::vector<Term> merge_terms(const std::vector<Term>& a, const std::vector<Term>& b) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].monomial > b[j].monomial)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].monomial > a[i].monomial) {
      out.push_back(b[j]);
      if constexpr (Subtract) out.back().coef = -out.back().coef;
      ++j;
    } else {
      Rational c = a[i].coef;
      if constexpr (Subtract) c -= b[j].coef; else c += b[j].coef;
      if (!c.is_zero()) out.push_back({a[i].monomial, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Poly& Poly::operator+=(const Poly& o) {
  check_same_vars(o);
  terms_ = merge_terms<false>(terms_, o.terms_);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  check_same_vars(o);
  terms_ = merge_terms<true>(terms_, o.terms_);
  return *this;
}

Poly& Poly::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coef *= c;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  a.check_same_vars(b);
  std::vector<Term> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) out.push_back({s.monomial * t.monomial, s.coef * t.coef});
  Poly p(a.vars_);
  p.terms_ = normalize(std::move(out));
  return p;
}

bool canonical_less(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  const std::size_t n = std::min(ta.size(), tb.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (ta[i].monomial != tb[i].monomial) return ta[i].monomial > tb[i].monomial;
    if (ta[i].coef != tb[i].coef) return ta[i].coef < tb[i].coef;
  }
  return ta.size() < tb.size();
}

Division divide(const Poly& num, const Poly& den) {
  if (den.is_zero()) throw DivisionByZero();
  if (!(num.vars() == den.vars())) throw VariableMismatch("polynomials are over different variable sets");
  const VarList& vars = num.vars();
  const Term& lead = den.leading_term();
  const Rational lead_inv = lead.coef.inverse();
  std::vector<Term> quotient;
  std::vector<Term> remainder;
  Poly p = num;
  while (!p.is_zero()) {
    const Term& lt = p.leading_term();
    if (lead.monomial.divides(lt.monomial)) {
      Term q{lead.monomial.quotient_of(lt.monomial), lt.coef * lead_inv};
      p -= Poly::monomial(vars, q.monomial, q.coef) * den;
      quotient.push_back(std::move(q));
    } else {
      remainder.push_back(lt);
      p -= Poly::monomial(vars, lt.monomial, lt.coef);
    }
  }
  return {Poly(vars, std::move(quotient)), Poly(vars, std::move(remainder))};
}

std::optional<Poly> exact_quotient(const Poly& num, const Poly& den) {
  auto d = divide(num, den);
  if (!d.exact()) return std::nullopt;
  return std::move(d.quotient);
}

Monomial monomial_content(const Poly& p) {
  const std::size_t n = p.vars().size();
  if (p.is_zero()) return Monomial(n);
  Monomial m = p.terms().front().monomial;
  for (const auto& t : p.terms())
    for (std::size_t i = 0; i < n; ++i) m[i] = std::min(m[i], t.monomial[i]);
  return m;
}

}  // namespace dlab
