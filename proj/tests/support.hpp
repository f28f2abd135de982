#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "darboux_lab/darboux.hpp"
#include "darboux_lab/field.hpp"
#include "darboux_lab/numerics.hpp"

namespace dlab::test {

std::string corpus_path(const std::string& name);
VectorField corpus(const std::string& name);

// System (x, y, z) with x' = x(1 - y + c x - a x z), y' = y(x - 1),
// z' = z(a x^2 - b) at the given parameters.
VectorField reference_system(const std::string& a, const std::string& b, const std::string& c);

// Polynomial over the field's variables, parameters substituted.
Poly P(const VectorField& field, const std::string& text);

std::vector<std::string> strs(const std::vector<Poly>& ps);
std::vector<std::string> cert_polys(const std::vector<DarbouxCert>& certs);

using Rng = std::mt19937_64;

Rational random_rational(Rng& rng, int max_num = 5, int max_den = 3);
Poly random_poly(Rng& rng, const VarList& vars, unsigned degree, std::size_t terms);
// Components x_i * (random polynomial of degree < degree).
VectorField random_kolmogorov(Rng& rng, const VarList& vars, unsigned degree);
VectorField random_field(Rng& rng, const VarList& vars, unsigned degree);

// Property suites shared by the unit tests and the acceptance binary.
struct PropertyResult {
  std::string name;
  int instances = 0;
  int failures = 0;
  std::string first_failure;
};

PropertyResult division_round_trip(std::uint64_t seed, int instances = 100);
PropertyResult lie_derivation_rule(std::uint64_t seed, int instances = 100);
PropertyResult cofactor_additivity(std::uint64_t seed, int instances = 100);
PropertyResult nullspace_soundness(std::uint64_t seed, int instances = 100);
PropertyResult rk4_order_four(std::uint64_t seed, int instances = 100);
PropertyResult jacobian_finite_differences(std::uint64_t seed, int instances = 100);

std::vector<PropertyResult> all_properties(std::uint64_t seed);

// xy exp(-(x + y)) on the a = b = c = 0 system, from its certificates.
DarbouxFunction integrable_h1(const VectorField& field);

}  // namespace dlab::test
