#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "darboux_lab/matrix.hpp"

#ifndef DARBOUX_LAB_CORPUS_DIR
#error "DARBOUX_LAB_CORPUS_DIR must be defined"
#endif

namespace dlab::test {

std::string corpus_path(const std::string& name) { return std::string(DARBOUX_LAB_CORPUS_DIR) + "/" + name; }

VectorField corpus(const std::string& name) { return load_field(corpus_path(name)); }

VectorField reference_system(const std::string& a, const std::string& b, const std::string& c) {
  std::ostringstream text;
  text << "vars: x y z\n"
       << "param a = " << a << "\nparam b = " << b << "\nparam c = " << c << "\n"
       << "dx/dt = x*(1 - y + c*x - a*x*z)\n"
       << "dy/dt = y*(-1 + x)\n"
       << "dz/dt = z*(-b + a*x^2)\n";
  return parse_field(text.str());
}

Poly P(const VectorField& field, const std::string& text) {
  std::map<std::string, Rational, std::less<>> params(field.params().begin(), field.params().end());
  return parse_poly(text, field.vars(), params);
}

std::vector<std::string> strs(const std::vector<Poly>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(p.str());
  return out;
}

std::vector<std::string> cert_polys(const std::vector<DarbouxCert>& certs) {
  std::vector<std::string> out;
  for (const auto& c : certs) out.push_back(c.f.str());
  return out;
}

Rational random_rational(Rng& rng, int max_num, int max_den) {
  std::uniform_int_distribution<int> num(-max_num, max_num);
  std::uniform_int_distribution<int> den(1, max_den);
  return Rational(mpz_class(num(rng)), mpz_class(den(rng)));
}

Poly random_poly(Rng& rng, const VarList& vars, unsigned degree, std::size_t terms) {
  const auto monos = monomials_up_to(vars.size(), degree);
  std::uniform_int_distribution<std::size_t> pick(0, monos.size() - 1);
  std::vector<Term> ts;
  for (std::size_t i = 0; i < terms; ++i) ts.push_back({monos[pick(rng)], random_rational(rng)});
  return Poly(vars, std::move(ts));
}

VectorField random_kolmogorov(Rng& rng, const VarList& vars, unsigned degree) {
  std::vector<Poly> comps;
  for (std::size_t i = 0; i < vars.size(); ++i)
    comps.push_back(Poly::variable(vars, i) * random_poly(rng, vars, degree - 1, 4));
  return VectorField(vars, std::move(comps));
}

VectorField random_field(Rng& rng, const VarList& vars, unsigned degree) {
  std::vector<Poly> comps;
  for (std::size_t i = 0; i < vars.size(); ++i) comps.push_back(random_poly(rng, vars, degree, 6));
  return VectorField(vars, std::move(comps));
}

namespace {

void record(PropertyResult& r, bool ok, const std::string& what) {
  ++r.instances;
  if (ok) return;
  if (r.failures++ == 0) r.first_failure = what;
}

Poly pow_product(const std::vector<Poly>& base, const std::vector<unsigned>& e) {
  Poly out = Poly::constant(base.front().vars(), 1);
  for (std::size_t i = 0; i < base.size(); ++i) out = out * base[i].pow(e[i]);
  return out;
}

std::optional<Poly> cofactor_of(const VectorField& field, const Poly& f) {
  const auto r = verify_darboux(field, f);
  if (const auto* c = std::get_if<DarbouxCert>(&r)) return c->cofactor;
  return std::nullopt;
}

}  // namespace

PropertyResult division_round_trip(std::uint64_t seed, int instances) {
  PropertyResult r{"division/multiplication round-trip"};
  Rng rng(seed);
  const VarList vars({"x", "y", "z"});
  for (int i = 0; i < instances; ++i) {
    const Poly p = random_poly(rng, vars, 3, 5);
    Poly q = random_poly(rng, vars, 2, 3);
    if (q.is_zero()) q = Poly::constant(vars, 1);
    const Division exact = divide(p * q, q);
    const Poly a = random_poly(rng, vars, 4, 6);
    const Division any = divide(a, q);
    bool reduced = true;
    for (const auto& t : any.remainder.terms())
      if (q.leading_term().monomial.divides(t.monomial)) reduced = false;
    record(r, exact.exact() && exact.quotient == p && any.quotient * q + any.remainder == a && reduced,
           "p = " + p.str() + ", q = " + q.str());
  }
  return r;
}

PropertyResult lie_derivation_rule(std::uint64_t seed, int instances) {
  PropertyResult r{"Lie derivative derivation rule"};
  Rng rng(seed);
  const VarList vars({"x", "y", "z"});
  for (int i = 0; i < instances; ++i) {
    const VectorField X = random_field(rng, vars, 3);
    const Poly f = random_poly(rng, vars, 3, 4);
    const Poly g = random_poly(rng, vars, 2, 4);
    const Rational c = random_rational(rng);
    const bool leibniz = lie_derivative(X, f * g) == lie_derivative(X, f) * g + f * lie_derivative(X, g);
    const bool linear = lie_derivative(X, f + c * g) == lie_derivative(X, f) + c * lie_derivative(X, g);
    record(r, leibniz && linear, "f = " + f.str() + ", g = " + g.str());
  }
  return r;
}

PropertyResult cofactor_additivity(std::uint64_t seed, int instances) {
  PropertyResult r{"cofactor additivity over products"};
  Rng rng(seed);
  std::uniform_int_distribution<unsigned> e(0, 2);
  for (int i = 0; i < instances; ++i) {
    VectorField X;
    std::vector<Poly> base;
    if (i % 2 == 0) {
      const VarList vars({"x", "y", "z"});
      X = random_kolmogorov(rng, vars, 3);
      for (std::size_t k = 0; k < 3; ++k) base.push_back(Poly::variable(vars, k));
    } else {
      // x' = x (1 + c x) r1, z' = z r2 keeps x, 1 + c x and z invariant.
      const VarList vars({"x", "z"});
      Rational c = random_rational(rng);
      if (c.is_zero()) c = 1;
      const Poly x = Poly::variable(vars, 0), z = Poly::variable(vars, 1);
      const Poly line = Poly::constant(vars, 1) + c * x;
      X = VectorField(vars, {x * line * random_poly(rng, vars, 1, 3), z * random_poly(rng, vars, 2, 3)});
      base = {x, line, z};
    }
    std::vector<unsigned> ef(base.size()), eg(base.size()), sum(base.size());
    for (std::size_t k = 0; k < base.size(); ++k) {
      ef[k] = e(rng);
      eg[k] = e(rng);
      sum[k] = ef[k] + eg[k];
    }
    const Poly f = pow_product(base, ef), g = pow_product(base, eg);
    const auto kf = cofactor_of(X, f), kg = cofactor_of(X, g), kfg = cofactor_of(X, pow_product(base, sum));
    record(r, kf && kg && kfg && *kfg == *kf + *kg, "f = " + f.str() + ", g = " + g.str());
  }
  return r;
}

PropertyResult nullspace_soundness(std::uint64_t seed, int instances) {
  PropertyResult r{"nullspace soundness"};
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> dim(1, 7);
  std::uniform_int_distribution<int> coin(0, 3);
  for (int i = 0; i < instances; ++i) {
    const std::size_t rows = dim(rng), cols = dim(rng);
    RatMatrix m(rows, cols);
    for (std::size_t a = 0; a < rows; ++a) {
      if (a > 0 && coin(rng) == 0) {
        // dependent row
        const Rational s = random_rational(rng);
        for (std::size_t b = 0; b < cols; ++b) m(a, b) = s * m(a - 1, b);
        continue;
      }
      for (std::size_t b = 0; b < cols; ++b) m(a, b) = coin(rng) == 0 ? Rational(0) : random_rational(rng);
    }
    const auto basis = nullspace(m);
    bool ok = basis.size() == cols - rank(m);
    for (const auto& v : basis)
      for (const auto& x : m.apply(v)) ok = ok && x.is_zero();
    ok = ok && span_basis(basis, cols).size() == basis.size();
    record(r, ok, std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
  }
  return r;
}

DarbouxFunction integrable_h1(const VectorField& field) {
  const auto x = std::get<DarbouxCert>(verify_darboux(field, P(field, "x")));
  const auto y = std::get<DarbouxCert>(verify_darboux(field, P(field, "y")));
  const auto e = std::get<ExpFactorCert>(verify_exp_factor(field, P(field, "x + y"), {0, 0, 0}));
  return DarbouxFunction{{{x, Rational(1)}, {y, Rational(1)}}, {{e, Rational(-1)}}};
}

PropertyResult rk4_order_four(std::uint64_t seed, int instances) {
  PropertyResult r{"RK4 order-4 drift scaling"};
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.3, 1.5);
  const VectorField field = reference_system("0", "0", "0");
  const ScalarFunction h("H1", integrable_h1(field));
  for (int i = 0; i < instances; ++i) {
    const std::vector<double> x0 = {u(rng), u(rng), 1.0};
    IntegratorOptions coarse;
    coarse.method = Method::RK4;
    coarse.dt = 0.1;
    IntegratorOptions fine = coarse;
    fine.dt = 0.05;
    const double d1 = conservation_drift(simulate(field, x0, 5.0, coarse), h).max_abs_drift;
    const double d2 = conservation_drift(simulate(field, x0, 5.0, fine), h).max_abs_drift;
    const double ratio = d1 / d2;
    record(r, ratio >= 8.0 && ratio <= 32.0, "x0 = (" + std::to_string(x0[0]) + ", " + std::to_string(x0[1]) +
                                                 "), ratio " + std::to_string(ratio));
  }
  return r;
}

PropertyResult jacobian_finite_differences(std::uint64_t seed, int instances) {
  PropertyResult r{"Jacobian vs finite differences"};
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const VarList vars({"x", "y", "z"});
  const VectorField chaotic = reference_system("29851/10000", "3", "2");
  for (int i = 0; i < instances; ++i) {
    const VectorField X = i % 4 == 0 ? chaotic : random_field(rng, vars, 3);
    const CompiledField cf(X);
    std::vector<double> x = {u(rng), u(rng), u(rng)};
    std::vector<double> jac(9), plus(3), minus(3);
    cf.jacobian(x, jac);
    double worst = 0;
    for (std::size_t j = 0; j < 3; ++j) {
      const double h = 1e-5 * std::max(1.0, std::abs(x[j]));
      auto xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      cf.rhs(xp, plus);
      cf.rhs(xm, minus);
      for (std::size_t k = 0; k < 3; ++k) {
        const double fd = (plus[k] - minus[k]) / (xp[j] - xm[j]);
        worst = std::max(worst, std::abs(jac[k * 3 + j] - fd) / std::max(1.0, std::abs(jac[k * 3 + j])));
      }
    }
    record(r, worst <= 1e-6, "relative error " + std::to_string(worst));
  }
  return r;
}

std::vector<PropertyResult> all_properties(std::uint64_t seed) {
  return {division_round_trip(seed),     lie_derivation_rule(seed + 1), cofactor_additivity(seed + 2),
          nullspace_soundness(seed + 3), rk4_order_four(seed + 4),      jacobian_finite_differences(seed + 5)};
}

}  // namespace dlab::test
