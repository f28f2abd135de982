#include <doctest.h>

#include "support.hpp"

using namespace dlab::test;

namespace {

constexpr std::uint64_t kSeed = 20240611;

void check(const PropertyResult& r) {
  INFO(r.name << ": " << r.first_failure);
  CHECK(r.instances == 100);
  CHECK(r.failures == 0);
}

}  // namespace

TEST_SUITE("properties") {

TEST_CASE("division round trip") { check(division_round_trip(kSeed)); }
TEST_CASE("derivation rule") { check(lie_derivation_rule(kSeed + 1)); }
TEST_CASE("cofactor additivity") { check(cofactor_additivity(kSeed + 2)); }
TEST_CASE("nullspace soundness") { check(nullspace_soundness(kSeed + 3)); }
TEST_CASE("RK4 order four") { check(rk4_order_four(kSeed + 4)); }
TEST_CASE("Jacobian against finite differences") { check(jacobian_finite_differences(kSeed + 5)); }

}  // TEST_SUITE
