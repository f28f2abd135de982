#include "darboux_lab/darboux.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include "darboux_lab/parallel.hpp"

namespace dlab {

namespace {

// Matrix whose j-th column holds the coefficients of cols[j]; rows are the
// monomials occurring in any column.
RatMatrix columns_matrix(const std::vector<Poly>& cols) {
  std::map<Monomial, std::size_t> rows;
  for (const auto& c : cols)
    for (const auto& t : c.terms()) rows.emplace(t.monomial, 0);
  std::size_t r = 0;
  for (auto& [m, i] : rows) i = r++;
  RatMatrix out(rows.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& t : cols[j].terms()) out(rows.at(t.monomial), j) = t.coef;
  return out;
}

Poly combine(const VarList& vars, const std::vector<Monomial>& basis, const RatVector& v, std::size_t offset = 0) {
  std::vector<Term> terms;
  for (std::size_t j = 0; j < basis.size(); ++j)
    if (!v[offset + j].is_zero()) terms.push_back({basis[j], v[offset + j]});
  return Poly(vars, std::move(terms));
}

void require_same_vars(const VectorField& field, const Poly& p, const char* what) {
  if (!(p.vars() == field.vars()))
    throw VariableMismatch(std::string(what) + " is not over the field's variables");
}

// Solves X f = K f for deg f <= d with the images X(m) cached.
class FixedCofactorSolver {
 public:
  FixedCofactorSolver(const VectorField& field, unsigned degree)
      : vars_(field.vars()), basis_(monomials_up_to(field.dimension(), degree)) {
    images_.reserve(basis_.size());
    for (const auto& m : basis_) images_.push_back(lie_derivative(field, Poly::monomial(vars_, m)));
  }

  RatMatrix system(const Poly& cofactor) const {
    std::vector<Poly> cols;
    cols.reserve(basis_.size());
    for (std::size_t j = 0; j < basis_.size(); ++j)
      cols.push_back(images_[j] - cofactor * Poly::monomial(vars_, basis_[j]));
    return columns_matrix(cols);
  }

  bool solvable(const Poly& cofactor) const { return rank(system(cofactor)) < basis_.size(); }

  std::vector<Poly> basis(const Poly& cofactor) const {
    std::vector<Poly> out;
    for (const auto& v : span_basis(nullspace(system(cofactor)), basis_.size()))
      out.push_back(combine(vars_, basis_, v));
    return out;
  }

 private:
  VarList vars_;
  std::vector<Monomial> basis_;
  std::vector<Poly> images_;
};

// Whether some nonzero homogeneous f of degree 1..d satisfies
// layer(f) = c * f, with c homogeneous of degree deg(layer) - 1.
class HomogeneousEigenTest {
 public:
  HomogeneousEigenTest(const VectorField& layer, unsigned degree) : vars_(layer.vars()) {
    for (unsigned n = 1; n <= degree; ++n) {
      auto monos = monomials_of_degree(layer.dimension(), n);
      std::vector<Poly> images;
      for (const auto& m : monos) images.push_back(lie_derivative(layer, Poly::monomial(vars_, m)));
      levels_.push_back({std::move(monos), std::move(images)});
    }
  }

  bool operator()(const Poly& c) const {
    for (const auto& [monos, images] : levels_) {
      std::vector<Poly> cols;
      for (std::size_t j = 0; j < monos.size(); ++j) cols.push_back(images[j] - c * Poly::monomial(vars_, monos[j]));
      if (rank(columns_matrix(cols)) < monos.size()) return true;
    }
    return false;
  }

 private:
  VarList vars_;
  std::vector<std::pair<std::vector<Monomial>, std::vector<Poly>>> levels_;
};

struct Coordinates {
  std::vector<Monomial> support;             // descending graded-lex
  std::vector<RatVector> generators;         // one coordinate vector per generator
  std::vector<std::vector<Rational>> values;  // reachable values per coordinate
};

Coordinates lattice_coordinates(const CofactorLattice& lattice) {
  Coordinates c;
  std::set<Monomial, std::greater<>> support;
  for (const auto& g : lattice.generators)
    for (const auto& t : g.terms()) support.insert(t.monomial);
  c.support.assign(support.begin(), support.end());
  for (const auto& g : lattice.generators) {
    RatVector v(c.support.size());
    for (std::size_t u = 0; u < c.support.size(); ++u) v[u] = g.coefficient(c.support[u]);
    c.generators.push_back(std::move(v));
  }
  const long bound = static_cast<long>(lattice.bound);
  for (std::size_t u = 0; u < c.support.size(); ++u) {
    std::set<Rational> reach{Rational(0)};
    for (const auto& g : c.generators) {
      if (g[u].is_zero()) continue;
      std::set<Rational> next;
      for (const auto& r : reach)
        for (long n = -bound; n <= bound; ++n) next.insert(r + Rational(n) * g[u]);
      reach = std::move(next);
    }
    c.values.emplace_back(reach.begin(), reach.end());
  }
  return c;
}

bool integer_feasible(const Coordinates& coords, unsigned bound, const RatVector& target) {
  const std::size_t k = coords.generators.size();
  const std::size_t rows = coords.support.size();
  RatMatrix aug(rows, k + 1);
  for (std::size_t u = 0; u < rows; ++u) {
    for (std::size_t i = 0; i < k; ++i) aug(u, i) = coords.generators[i][u];
    aug(u, k) = target[u];
  }
  const Echelon e = rref(std::move(aug));
  if (!e.pivots.empty() && e.pivots.back() == k) return false;

  std::vector<bool> is_pivot(k, false);
  for (std::size_t p : e.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t i = 0; i < k; ++i)
    if (!is_pivot[i]) free_cols.push_back(i);

  const Rational lo(-static_cast<long>(bound));
  const Rational hi(static_cast<long>(bound));
  std::vector<Rational> assigned(free_cols.size());
  // Pivot value n_p = rhs - sum_f R(r, f) n_f, accumulated incrementally.
  std::vector<RatVector> partial(free_cols.size() + 1, RatVector(e.pivots.size()));
  for (std::size_t r = 0; r < e.pivots.size(); ++r) partial[0][r] = e.reduced(r, k);

  std::function<bool(std::size_t)> rec = [&](std::size_t depth) -> bool {
    if (depth == free_cols.size()) {
      for (const auto& v : partial[depth])
        if (!v.is_integer() || v < lo || v > hi) return false;
      return true;
    }
    for (long n = -static_cast<long>(bound); n <= static_cast<long>(bound); ++n) {
      const Rational rn(n);
      for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        partial[depth + 1][r] = partial[depth][r];
        const Rational& a = e.reduced(r, free_cols[depth]);
        if (!a.is_zero()) partial[depth + 1][r].sub_mul(a, rn);
      }
      if (rec(depth + 1)) return true;
    }
    return false;
  };
  return rec(0);
}

std::optional<RatVector> to_coordinates(const Coordinates& coords, const Poly& p) {
  RatVector v(coords.support.size());
  for (const auto& t : p.terms()) {
    const auto it = std::find(coords.support.begin(), coords.support.end(), t.monomial);
    if (it == coords.support.end()) return std::nullopt;
    v[static_cast<std::size_t>(it - coords.support.begin())] = t.coef;
  }
  return v;
}

bool sorted_cert_less(const DarbouxCert& a, const DarbouxCert& b) {
  if (a.f.degree() != b.f.degree()) return a.f.degree() < b.f.degree();
  return canonical_less(a.f, b.f);
}

// Some nonempty product of `certs` (with repetition) divides g.
bool divisible_by_product(const Poly& g, const std::vector<DarbouxCert>& certs) {
  const int budget = g.degree();
  std::function<bool(std::size_t, const Poly&, int)> rec = [&](std::size_t start, const Poly& prod,
                                                               int deg) -> bool {
    for (std::size_t j = start; j < certs.size(); ++j) {
      const int d = certs[j].f.degree();
      if (d <= 0 || deg + d > budget) continue;
      const Poly next = prod * certs[j].f;
      if (exact_quotient(g, next)) return true;
      if (rec(j, next, deg + d)) return true;
    }
    return false;
  };
  return rec(0, Poly::constant(g.vars(), 1), 0);
}

}  // namespace

std::variant<DarbouxCert, NotDarboux> verify_darboux(const VectorField& field, const Poly& f) {
  require_same_vars(field, f, "polynomial");
  if (f.is_zero()) throw Error("the zero polynomial cannot be a Darboux polynomial");
  Division div = divide(lie_derivative(field, f), f);
  if (!div.exact()) return NotDarboux{std::move(div.remainder)};
  return DarbouxCert{f, std::move(div.quotient)};
}

bool certificate_holds(const VectorField& field, const DarbouxCert& cert) {
  if (cert.f.is_zero()) return false;
  if (cert.cofactor.degree() > std::max(field.degree() - 1, 0)) return false;
  return lie_derivative(field, cert.f) == cert.cofactor * cert.f;
}

std::vector<DarbouxCert> coordinate_certificates(const VectorField& field) {
  std::vector<DarbouxCert> out;
  for (std::size_t i = 0; i < field.dimension(); ++i)
    if (auto k = coordinate_cofactor(field, i)) out.push_back({Poly::variable(field.vars(), i), std::move(*k)});
  return out;
}

std::vector<Poly> search_darboux_fixed_cofactor(const VectorField& field, const Poly& cofactor, unsigned degree) {
  require_same_vars(field, cofactor, "cofactor");
  return FixedCofactorSolver(field, degree).basis(cofactor);
}

CofactorLattice default_lattice(const VectorField& field, unsigned bound) {
  std::vector<Poly> gens;
  const auto push = [&gens](Poly p) {
    if (p.is_zero()) return;
    if (std::find(gens.begin(), gens.end(), p) == gens.end()) gens.push_back(std::move(p));
  };
  const auto coords = coordinate_certificates(field);
  for (const auto& c : coords) push(c.cofactor);
  push(Poly::constant(field.vars(), 1));
  for (std::size_t i = 0; i < field.dimension(); ++i) push(Poly::variable(field.vars(), i));
  const int top = field.degree() - 1;
  if (top >= 1) {
    for (const auto& c : coords) {
      Poly part = c.cofactor.homogeneous_part(static_cast<std::uint32_t>(top));
      if (!part.is_zero() && part.leading_term().coef.sign() < 0) part = -part;
      push(std::move(part));
    }
  }
  return {std::move(gens), bound};
}

bool lattice_contains(const CofactorLattice& lattice, const Poly& cofactor) {
  for (const auto& g : lattice.generators)
    if (!(g.vars() == cofactor.vars())) throw VariableMismatch("cofactor is not over the lattice's variables");
  if (cofactor.is_zero()) return true;
  Coordinates coords;
  std::set<Monomial, std::greater<>> support;
  for (const auto& g : lattice.generators)
    for (const auto& t : g.terms()) support.insert(t.monomial);
  coords.support.assign(support.begin(), support.end());
  for (const auto& g : lattice.generators) {
    RatVector v(coords.support.size());
    for (std::size_t u = 0; u < coords.support.size(); ++u) v[u] = g.coefficient(coords.support[u]);
    coords.generators.push_back(std::move(v));
  }
  const auto target = to_coordinates(coords, cofactor);
  return target && integer_feasible(coords, lattice.bound, *target);
}

std::vector<Poly> enumerate_cofactors(const VectorField& field, const CofactorLattice& lattice,
                                      std::size_t max_size) {
  for (const auto& g : lattice.generators) require_same_vars(field, g, "lattice generator");
  std::set<Monomial, std::greater<>> support_set;
  for (const auto& g : lattice.generators)
    for (const auto& t : g.terms()) support_set.insert(t.monomial);
  const std::vector<Monomial> support(support_set.begin(), support_set.end());

  // Scale each coordinate to integers so points can be stored as int64.
  std::vector<mpz_class> scale(support.size(), 1);
  for (const auto& g : lattice.generators)
    for (std::size_t u = 0; u < support.size(); ++u) {
      const Rational c = g.coefficient(support[u]);
      if (!c.is_zero()) scale[u] = lcm(scale[u], c.denominator());
    }
  const auto fits = [](const mpz_class& v) { return v.fits_slong_p(); };
  std::vector<std::vector<long>> gens;
  for (const auto& g : lattice.generators) {
    std::vector<long> v(support.size());
    for (std::size_t u = 0; u < support.size(); ++u) {
      const Rational c = g.coefficient(support[u]);
      const mpz_class n = c.numerator() * (scale[u] / c.denominator());
      mpz_class reach = n * static_cast<long>(lattice.bound) * static_cast<long>(lattice.generators.size());
      if (!fits(reach)) throw Error("lattice coefficients too large to enumerate");
      v[u] = n.get_si();
    }
    gens.push_back(std::move(v));
  }

  const long bound = static_cast<long>(lattice.bound);
  std::set<std::vector<long>> points{std::vector<long>(support.size(), 0)};
  for (const auto& g : gens) {
    if (std::all_of(g.begin(), g.end(), [](long v) { return v == 0; })) continue;
    std::set<std::vector<long>> next;
    for (const auto& p : points)
      for (long n = -bound; n <= bound; ++n) {
        std::vector<long> q = p;
        for (std::size_t u = 0; u < q.size(); ++u) q[u] += n * g[u];
        next.insert(std::move(q));
        if (next.size() > max_size)
          throw Error("cofactor lattice has more than " + std::to_string(max_size) + " elements");
      }
    points = std::move(next);
  }

  std::vector<Poly> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    std::vector<Term> terms;
    for (std::size_t u = 0; u < support.size(); ++u)
      if (p[u] != 0) terms.push_back({support[u], Rational(mpz_class(p[u]), scale[u])});
    out.emplace_back(field.vars(), std::move(terms));
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

std::vector<Poly> admissible_cofactors(const VectorField& field, const CofactorLattice& lattice, unsigned degree) {
  for (const auto& g : lattice.generators) require_same_vars(field, g, "lattice generator");
  if (degree == 0) return {};
  const Coordinates coords = lattice_coordinates(lattice);
  const std::size_t ncoords = coords.support.size();
  const VarList& vars = field.vars();
  const int top = field.degree() - 1;

  const auto poly_of = [&](const RatVector& values, const std::vector<std::size_t>& key) {
    std::vector<Term> terms;
    for (std::size_t u : key)
      if (!values[u].is_zero()) terms.push_back({coords.support[u], values[u]});
    return Poly(vars, std::move(terms));
  };

  struct Filter {
    std::vector<std::size_t> key;
    std::function<bool(const RatVector&)> test;
    std::map<std::vector<Rational>, bool> memo;
  };
  std::vector<Filter> filters;
  const auto layers = degree_split(field);

  if (top >= 0 && !layers.empty()) {
    // Highest-degree homogeneous equation.
    std::vector<std::size_t> key;
    for (std::size_t u = 0; u < ncoords; ++u)
      if (static_cast<int>(coords.support[u].degree()) >= top) key.push_back(u);
    auto eigen = std::make_shared<HomogeneousEigenTest>(layers.back().field, degree);
    filters.push_back({key, [=, &coords](const RatVector& v) {
                         std::vector<Term> terms;
                         for (std::size_t u : key) {
                           if (v[u].is_zero()) continue;
                           if (static_cast<int>(coords.support[u].degree()) > top) return false;
                           terms.push_back({coords.support[u], v[u]});
                         }
                         return (*eigen)(Poly(vars, std::move(terms)));
                       },
                       {}});
  }

  if (!layers.empty() && layers.front().degree >= 1 && top >= 1) {
    // Lowest-degree equation: the constant part of K must be zero or an
    // eigenvalue of the linear part on homogeneous polynomials.
    std::vector<std::size_t> key;
    for (std::size_t u = 0; u < ncoords; ++u)
      if (coords.support[u].is_one()) key.push_back(u);
    std::vector<Poly> linear;
    for (const auto& c : field.components()) linear.push_back(c.homogeneous_part(1));
    auto eigen = std::make_shared<HomogeneousEigenTest>(VectorField(vars, linear), degree);
    filters.push_back({key, [=](const RatVector& v) {
                         if (key.empty() || v[key[0]].is_zero()) return true;
                         return (*eigen)(Poly::constant(vars, v[key[0]]));
                       },
                       {}});
  }

  for (std::size_t i = 0; i < field.dimension(); ++i) {
    if (!coordinate_cofactor(field, i)) continue;
    const VectorField plane = restrict_to_plane(field, vars[i]);
    std::vector<std::size_t> key;
    for (std::size_t u = 0; u < ncoords; ++u)
      if (coords.support[u][i] == 0) key.push_back(u);
    auto solver = std::make_shared<FixedCofactorSolver>(plane, degree);
    const VarList plane_vars = plane.vars();
    filters.push_back({key, [=](const RatVector& v) {
                         return solver->solvable(poly_of(v, key).rebase(plane_vars));
                       },
                       {}});
  }

  // Greedy coordinate order: complete the filter with the fewest open
  // coordinates (fewest candidate values on ties) first.
  std::vector<std::size_t> order;
  std::vector<bool> placed(ncoords, false);
  std::vector<bool> filter_done(filters.size(), false);
  while (true) {
    std::size_t best = filters.size();
    std::size_t best_open = 0;
    double best_volume = 0;
    for (std::size_t f = 0; f < filters.size(); ++f) {
      if (filter_done[f]) continue;
      std::size_t open = 0;
      double volume = 1;
      for (std::size_t u : filters[f].key)
        if (!placed[u]) {
          ++open;
          volume *= static_cast<double>(coords.values[u].size());
        }
      if (best == filters.size() || open < best_open || (open == best_open && volume < best_volume)) {
        best = f;
        best_open = open;
        best_volume = volume;
      }
    }
    if (best == filters.size()) break;
    filter_done[best] = true;
    for (std::size_t u : filters[best].key)
      if (!placed[u]) {
        placed[u] = true;
        order.push_back(u);
      }
  }
  for (std::size_t u = 0; u < ncoords; ++u)
    if (!placed[u]) order.push_back(u);

  // Each filter runs as soon as its last key coordinate is assigned.
  std::vector<std::vector<std::size_t>> ready(ncoords + 1);
  {
    std::vector<std::size_t> position(ncoords);
    for (std::size_t p = 0; p < ncoords; ++p) position[order[p]] = p;
    for (std::size_t f = 0; f < filters.size(); ++f) {
      std::size_t depth = 0;
      for (std::size_t u : filters[f].key) depth = std::max(depth, position[u] + 1);
      ready[depth].push_back(f);
    }
    for (auto& r : ready)
      std::stable_sort(r.begin(), r.end(),
                       [&](std::size_t a, std::size_t b) { return filters[a].key.size() < filters[b].key.size(); });
  }

  const auto pass = [&](std::size_t depth, const RatVector& values) {
    for (std::size_t f : ready[depth]) {
      auto& flt = filters[f];
      std::vector<Rational> k;
      k.reserve(flt.key.size());
      for (std::size_t u : flt.key) k.push_back(values[u]);
      auto it = flt.memo.find(k);
      if (it == flt.memo.end()) it = flt.memo.emplace(std::move(k), flt.test(values)).first;
      if (!it->second) return false;
    }
    return true;
  };

  std::vector<Poly> out;
  RatVector values(ncoords);
  std::vector<std::size_t> all(ncoords);
  for (std::size_t u = 0; u < ncoords; ++u) all[u] = u;
  std::function<void(std::size_t)> rec = [&](std::size_t depth) {
    if (!pass(depth, values)) return;
    if (depth == ncoords) {
      if (integer_feasible(coords, lattice.bound, values)) out.push_back(poly_of(values, all));
      return;
    }
    const std::size_t u = order[depth];
    for (const auto& v : coords.values[u]) {
      values[u] = v;
      rec(depth + 1);
    }
    values[u] = Rational(0);
  };
  rec(0);
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

std::vector<DarbouxCert> search_darboux(const VectorField& field, unsigned degree, const CofactorLattice& lattice) {
  if (degree == 0) return {};
  std::vector<DarbouxCert> accepted = coordinate_certificates(field);
  const auto candidates = admissible_cofactors(field, lattice, degree);
  const FixedCofactorSolver solver(field, degree);
  const auto bases = ordered_map(candidates.size(), [&](std::size_t i) { return solver.basis(candidates[i]); });

  std::vector<DarbouxCert> pool;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    for (const auto& p : bases[i])
      if (!p.is_constant()) pool.push_back({p.monic(), candidates[i]});
  std::sort(pool.begin(), pool.end(), sorted_cert_less);

  for (const auto& cand : pool) {
    const Poly content = Poly::monomial(field.vars(), monomial_content(cand.f));
    Poly g = exact_quotient(cand.f, content).value().monic();
    if (g.is_constant()) continue;
    if (divisible_by_product(g, accepted)) continue;
    auto cert = verify_darboux(field, g);
    accepted.push_back(std::get<DarbouxCert>(std::move(cert)));
  }
  std::stable_sort(accepted.begin(), accepted.end(), sorted_cert_less);
  return accepted;
}

std::variant<ExpFactorCert, NotExpFactor> verify_exp_factor(const VectorField& field, const Poly& g,
                                                            const std::vector<unsigned>& s) {
  return verify_exp_factor(field, g, s, coordinate_certificates(field));
}

std::variant<ExpFactorCert, NotExpFactor> verify_exp_factor(const VectorField& field, const Poly& g,
                                                            const std::vector<unsigned>& s,
                                                            const std::vector<DarbouxCert>& denominators) {
  require_same_vars(field, g, "polynomial");
  if (s.size() != denominators.size())
    throw Error("expected " + std::to_string(denominators.size()) + " exponents, got " + std::to_string(s.size()));
  Poly weighted(field.vars());
  Poly denom = Poly::constant(field.vars(), 1);
  std::vector<Poly> factors;
  for (std::size_t i = 0; i < s.size(); ++i) {
    factors.push_back(denominators[i].f);
    if (s[i] == 0) continue;
    weighted += Rational(static_cast<long>(s[i])) * denominators[i].cofactor;
    denom = denom * denominators[i].f.pow(s[i]);
    if (exact_quotient(g, denominators[i].f))
      return NotExpFactor{"g is divisible by the denominator factor " + denominators[i].f.str(), Poly(field.vars())};
  }
  Division div = divide(lie_derivative(field, g) - g * weighted, denom);
  if (!div.exact()) return NotExpFactor{"X(g) - g*sum(s_i*K_i) is not divisible by the denominator", div.remainder};
  if (div.quotient.degree() > std::max(field.degree() - 1, 0))
    return NotExpFactor{"cofactor has degree " + std::to_string(div.quotient.degree()) + ", above the field degree minus one",
                        Poly(field.vars())};
  return ExpFactorCert{g, s, std::move(div.quotient), std::move(factors)};
}

bool certificate_holds(const VectorField& field, const ExpFactorCert& cert) {
  if (cert.s.size() != cert.denominators.size()) return false;
  Poly lhs = lie_derivative(field, cert.g);
  Poly denom = Poly::constant(field.vars(), 1);
  for (std::size_t i = 0; i < cert.s.size(); ++i) {
    if (cert.s[i] == 0) continue;
    if (cert.denominators[i].is_zero()) return false;
    auto k = verify_darboux(field, cert.denominators[i]);
    if (!std::holds_alternative<DarbouxCert>(k)) return false;
    lhs -= Rational(static_cast<long>(cert.s[i])) * std::get<DarbouxCert>(k).cofactor * cert.g;
    denom = denom * cert.denominators[i].pow(cert.s[i]);
  }
  return lhs == cert.cofactor * denom;
}

std::vector<ExpFactorCert> search_exp_factors(const VectorField& field, unsigned g_degree, unsigned s_bound) {
  return search_exp_factors(field, g_degree, s_bound, coordinate_certificates(field));
}

std::vector<ExpFactorCert> search_exp_factors(const VectorField& field, unsigned g_degree, unsigned s_bound,
                                              const std::vector<DarbouxCert>& denominators) {
  const VarList& vars = field.vars();
  const std::size_t k = denominators.size();
  const auto g_basis = monomials_up_to(field.dimension(), g_degree);
  const auto l_basis = monomials_up_to(field.dimension(), static_cast<std::uint32_t>(std::max(field.degree() - 1, 0)));
  const std::size_t ng = g_basis.size();
  const std::size_t nl = l_basis.size();
  std::vector<Poly> g_images;
  for (const auto& m : g_basis) g_images.push_back(lie_derivative(field, Poly::monomial(vars, m)));
  std::vector<Poly> factors;
  for (const auto& d : denominators) factors.push_back(d.f);

  std::vector<std::vector<unsigned>> exponents{std::vector<unsigned>(k, 0)};
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::vector<unsigned>> next;
    for (const auto& e : exponents)
      for (unsigned v = 0; v <= s_bound; ++v) {
        auto f = e;
        f[i] = v;
        next.push_back(std::move(f));
      }
    exponents = std::move(next);
  }
  std::sort(exponents.begin(), exponents.end());

  const auto per_s = ordered_map(exponents.size(), [&](std::size_t idx) {
    const auto& s = exponents[idx];
    Poly weighted(vars);
    Poly denom = Poly::constant(vars, 1);
    for (std::size_t i = 0; i < k; ++i) {
      if (s[i] == 0) continue;
      weighted += Rational(static_cast<long>(s[i])) * denominators[i].cofactor;
      denom = denom * denominators[i].f.pow(s[i]);
    }
    std::vector<Poly> cols;
    for (std::size_t j = 0; j < ng; ++j) cols.push_back(g_images[j] - weighted * Poly::monomial(vars, g_basis[j]));
    for (std::size_t j = 0; j < nl; ++j) cols.push_back(-(denom * Poly::monomial(vars, l_basis[j])));
    const auto space = nullspace(columns_matrix(cols));

    std::vector<RatVector> degenerate;
    const auto lift = [&](const RatVector& c) {
      RatVector v(ng + nl);
      for (std::size_t j = 0; j < space.size(); ++j)
        if (!c[j].is_zero())
          for (std::size_t q = 0; q < ng + nl; ++q)
            if (!space[j][q].is_zero()) v[q] += c[j] * space[j][q];
      return v;
    };
    if (!space.empty()) {
      // Solutions with L = 0.
      RatMatrix l_part(nl, space.size());
      for (std::size_t j = 0; j < space.size(); ++j)
        for (std::size_t q = 0; q < nl; ++q) l_part(q, j) = space[j][ng + q];
      for (const auto& c : nullspace(l_part)) degenerate.push_back(lift(c));
      // Solutions whose g is divisible by some f_i with s_i > 0.
      for (std::size_t i = 0; i < k; ++i) {
        if (s[i] == 0) continue;
        std::vector<Poly> div_cols;
        for (const auto& w : space) div_cols.push_back(combine(vars, g_basis, w));
        const int fd = denominators[i].f.degree();
        if (static_cast<int>(g_degree) >= fd)
          for (const auto& m : monomials_up_to(field.dimension(), g_degree - static_cast<unsigned>(fd)))
            div_cols.push_back(-(denominators[i].f * Poly::monomial(vars, m)));
        for (const auto& c : nullspace(columns_matrix(div_cols))) {
          RatVector head(c.begin(), c.begin() + static_cast<long>(space.size()));
          degenerate.push_back(lift(head));
        }
      }
    }

    std::vector<ExpFactorCert> found;
    for (auto v : quotient_basis(space, degenerate, ng + nl)) {
      Poly g = combine(vars, g_basis, v);
      const Rational lead = g.leading_term().coef;
      for (auto& x : v) x /= lead;
      found.push_back({combine(vars, g_basis, v), s, combine(vars, l_basis, v, ng), factors});
    }
    return found;
  });

  std::vector<ExpFactorCert> out;
  for (const auto& batch : per_s) out.insert(out.end(), batch.begin(), batch.end());
  return out;
}

Poly cofactor_balance(const DarbouxFunction& fn) {
  std::optional<Poly> sum;
  const auto add = [&sum](const Poly& p) {
    if (sum)
      *sum += p;
    else
      sum = p;
  };
  for (const auto& [cert, lambda] : fn.darboux_terms) add(lambda * cert.cofactor);
  for (const auto& [cert, mu] : fn.exp_terms) add(mu * cert.cofactor);
  return sum ? *sum : Poly();
}

namespace {

std::string wrap(const std::string& s) {
  return s.find_first_of(" /") == std::string::npos ? s : "(" + s + ")";
}

std::string power(const std::string& base, const Rational& e) {
  if (e.is_one()) return base;
  if (e.is_integer() && e.sign() > 0) return base + "^" + e.str();
  return base + "^(" + e.str() + ")";
}

std::string exp_argument(const ExpFactorCert& cert) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < cert.s.size(); ++i)
    if (cert.s[i] > 0) parts.push_back(power(wrap(cert.denominators[i].str()), Rational(static_cast<long>(cert.s[i]))));
  if (parts.empty()) return cert.g.str();
  std::string den;
  for (const auto& p : parts) den += (den.empty() ? "" : "*") + p;
  return wrap(cert.g.str()) + "/" + (parts.size() > 1 ? "(" + den + ")" : den);
}

}  // namespace

std::string describe(const DarbouxFunction& fn) {
  std::vector<std::string> factors;
  for (const auto& [cert, lambda] : fn.darboux_terms) factors.push_back(power(wrap(cert.f.str()), lambda));
  for (const auto& [cert, mu] : fn.exp_terms) {
    const std::string arg = exp_argument(cert);
    if (mu.is_one())
      factors.push_back("exp(" + arg + ")");
    else if ((-mu).is_one())
      factors.push_back("exp(-" + wrap(arg) + ")");
    else
      factors.push_back("exp(" + mu.str() + "*" + wrap(arg) + ")");
  }
  if (factors.empty()) return "1";
  std::string out;
  for (const auto& f : factors) out += (out.empty() ? "" : "*") + f;
  return out;
}

std::vector<DarbouxFunction> assemble_darboux_integrals(const std::vector<DarbouxCert>& certs,
                                                        const std::vector<ExpFactorCert>& exp_factors) {
  std::vector<Poly> cols;
  for (const auto& c : certs) cols.push_back(c.cofactor);
  for (const auto& e : exp_factors) cols.push_back(e.cofactor);
  if (cols.empty()) return {};
  const std::size_t n = cols.size();
  std::vector<DarbouxFunction> out;
  for (const auto& raw : span_basis(nullspace(columns_matrix(cols)), n)) {
    const RatVector v = primitive_integer(raw);
    DarbouxFunction fn;
    for (std::size_t i = 0; i < certs.size(); ++i)
      if (!v[i].is_zero()) fn.darboux_terms.emplace_back(certs[i], v[i]);
    for (std::size_t j = 0; j < exp_factors.size(); ++j)
      if (!v[certs.size() + j].is_zero()) fn.exp_terms.emplace_back(exp_factors[j], v[certs.size() + j]);
    out.push_back(std::move(fn));
  }
  return out;
}

RationalObstruction rational_obstruction(const VectorField& field, unsigned degree, const CofactorLattice& lattice) {
  RationalObstruction out;
  out.degree = degree;
  out.lattice_bound = lattice.bound;
  const FixedCofactorSolver solver(field, degree);
  for (auto& p : solver.basis(Poly(field.vars())))
    if (!p.is_constant()) out.polynomial_integrals.push_back(std::move(p));
  const auto candidates = admissible_cofactors(field, lattice, degree);
  const auto bases = ordered_map(candidates.size(), [&](std::size_t i) {
    return candidates[i].is_zero() ? std::vector<Poly>{} : solver.basis(candidates[i]);
  });
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (bases[i].size() >= 2) out.shared_cofactors.push_back({candidates[i], bases[i]});
  return out;
}

}  // namespace dlab
