#pragma once

#include <string>
#include <variant>
#include <vector>

#include "darboux_lab/field.hpp"
#include "darboux_lab/matrix.hpp"
#include "darboux_lab/poly.hpp"

namespace dlab {

// f with X f = K f.
struct DarbouxCert {
  Poly f;
  Poly cofactor;
  friend bool operator==(const DarbouxCert&, const DarbouxCert&) = default;
};

struct NotDarboux {
  Poly remainder;  // nonzero remainder of X f divided by f
};

std::variant<DarbouxCert, NotDarboux> verify_darboux(const VectorField& field, const Poly& f);

// Re-checks X f == K f by multiplication (independent of the division used
// to derive K).
bool certificate_holds(const VectorField& field, const DarbouxCert& cert);

// (x_i, component_i / x_i) for every variable whose coordinate plane is
// invariant, in variable order.
std::vector<DarbouxCert> coordinate_certificates(const VectorField& field);

// Basis of { f : deg f <= d, X f = K f }, including constants when K = 0.
// Each element has leading coefficient 1 and distinct leading monomials,
// listed from the largest leading monomial down.
std::vector<Poly> search_darboux_fixed_cofactor(const VectorField& field, const Poly& cofactor, unsigned degree);

// Candidate cofactors { sum n_i * generator_i : |n_i| <= bound }.
struct CofactorLattice {
  std::vector<Poly> generators;
  unsigned bound = 0;
};

// Coordinate cofactors, then 1 and every variable, then the top-degree
// homogeneous parts of the coordinate cofactors (sign-normalized).
CofactorLattice default_lattice(const VectorField& field, unsigned bound);

// Whether `cofactor` is an integer combination of the generators within the
// bound.
bool lattice_contains(const CofactorLattice& lattice, const Poly& cofactor);

// The whole candidate set, deduplicated and in canonical order. Throws when
// the set would exceed `max_size` elements.
std::vector<Poly> enumerate_cofactors(const VectorField& field, const CofactorLattice& lattice,
                                      std::size_t max_size = 2'000'000);

// Lattice candidates that survive exact necessary conditions for a
// non-constant solution of X f = K f (deg f <= d) not divisible by any
// invariant coordinate variable: the top-degree and lowest-degree
// homogeneous equations and the restriction to each invariant coordinate
// plane. Canonical order.
std::vector<Poly> admissible_cofactors(const VectorField& field, const CofactorLattice& lattice, unsigned degree);

// Darboux polynomials of degree <= d whose cofactor lies in the lattice,
// excluding those divisible by a product of earlier results. Coordinate
// certificates are always included. Complete relative to the lattice.
std::vector<DarbouxCert> search_darboux(const VectorField& field, unsigned degree, const CofactorLattice& lattice);

// exp(g / prod f_i^{s_i}) with X(g) - g * sum s_i K_i = L * prod f_i^{s_i}.
struct ExpFactorCert {
  Poly g;
  std::vector<unsigned> s;
  Poly cofactor;                 // L
  std::vector<Poly> denominators;  // f_i, aligned with s
};

struct NotExpFactor {
  std::string reason;
  Poly remainder;
};

// Denominator factors default to the coordinate certificates.
std::variant<ExpFactorCert, NotExpFactor> verify_exp_factor(const VectorField& field, const Poly& g,
                                                            const std::vector<unsigned>& s);
std::variant<ExpFactorCert, NotExpFactor> verify_exp_factor(const VectorField& field, const Poly& g,
                                                            const std::vector<unsigned>& s,
                                                            const std::vector<DarbouxCert>& denominators);

bool certificate_holds(const VectorField& field, const ExpFactorCert& cert);

// For every s in [0, s_bound]^k, solves the linear system in (g, L) jointly
// and returns a basis of its solutions modulo the degenerate ones: L = 0
// (first integrals, including constant g) and g divisible by some f_i with
// s_i > 0 (which reduce to a smaller s). Complete for the given bounds.
std::vector<ExpFactorCert> search_exp_factors(const VectorField& field, unsigned g_degree, unsigned s_bound);
std::vector<ExpFactorCert> search_exp_factors(const VectorField& field, unsigned g_degree, unsigned s_bound,
                                              const std::vector<DarbouxCert>& denominators);

// prod f_i^{lambda_i} * prod E_j^{mu_j}.
struct DarbouxFunction {
  std::vector<std::pair<DarbouxCert, Rational>> darboux_terms;
  std::vector<std::pair<ExpFactorCert, Rational>> exp_terms;
};

// sum lambda_i K_i + sum mu_j L_j; zero exactly when the function is a first
// integral.
Poly cofactor_balance(const DarbouxFunction& fn);

// Human-readable form, e.g. "x*y*exp(-(x + y))".
std::string describe(const DarbouxFunction& fn);

// One Darboux function per kernel vector of the cofactor balance, scaled to
// coprime integers with the first nonzero exponent positive. Terms with zero
// exponent are dropped.
std::vector<DarbouxFunction> assemble_darboux_integrals(const std::vector<DarbouxCert>& certs,
                                                        const std::vector<ExpFactorCert>& exp_factors);

struct SameCofactorSpace {
  Poly cofactor;
  std::vector<Poly> basis;  // at least two elements
};

struct RationalObstruction {
  unsigned degree = 0;
  unsigned lattice_bound = 0;
  std::vector<Poly> polynomial_integrals;  // non-constant solutions of X f = 0
  std::vector<SameCofactorSpace> shared_cofactors;
  // True when both lists are empty: no rational first integral of degree
  // <= d relative to the lattice.
  bool holds() const { return polynomial_integrals.empty() && shared_cofactors.empty(); }
};

RationalObstruction rational_obstruction(const VectorField& field, unsigned degree, const CofactorLattice& lattice);

}  // namespace dlab
