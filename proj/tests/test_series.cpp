#include <doctest.h>

#include "darboux_lab/matrix.hpp"
#include "darboux_lab/series.hpp"
#include "support.hpp"

using namespace dlab;
using dlab::test::P;
using Strings = std::vector<std::string>;

namespace {

RatVector coords(const Poly& p, const std::vector<Monomial>& monos) {
  RatVector v;
  for (const auto& m : monos) v.push_back(p.coefficient(m));
  return v;
}

bool in_span(const Poly& p, const std::vector<Poly>& basis, unsigned degree) {
  const auto monos = monomials_up_to(p.vars().size(), degree);
  std::vector<RatVector> vs;
  for (const auto& b : basis) vs.push_back(coords(b, monos));
  const std::size_t before = span_basis(vs, monos.size()).size();
  vs.push_back(coords(p, monos));
  return span_basis(vs, monos.size()).size() == before;
}

// Graded truncation of x y exp(-(x + y)) to total degree `degree`, summed
// from the exponential series.
Poly h1_truncation(const VectorField& X, unsigned degree) {
  const Poly s = P(X, "x + y");
  Poly sum(X.vars());
  Rational factorial = 1;
  for (unsigned k = 0; k + 2 <= degree; ++k) {
    if (k > 0) factorial *= static_cast<int>(k);
    sum += (k % 2 ? Rational(-1) : Rational(1)) / factorial * s.pow(k);
  }
  return P(X, "x*y") * sum;
}

}  // namespace

TEST_SUITE("series") {

TEST_CASE("no formal integral on the plane z = 0 when c > 0") {
  const auto X = test::corpus("restricted_z0_c2.vf");
  const auto space = formal_integral_space(X, 8, 2);
  CHECK(space.dimension() == 1);
  CHECK(test::strs(space.basis) == Strings{"1"});
  CHECK_FALSE(space.depends_only_on.has_value());
}

TEST_CASE("the truncated H1 survives at c = 0") {
  const auto X = test::corpus("restricted_z0_c0.vf");
  const auto space = formal_integral_space(X, 4, 0);
  CHECK(space.dimension() >= 2);
  const Poly h = h1_truncation(X, 4);
  CHECK(h == P(X, "x*y - x*y*(x + y) + 1/2*x*y*(x + y)^2"));
  CHECK(in_span(h, space.basis, 4));
}

TEST_CASE("no formal integral when b = 0") {
  const auto X = test::corpus("lv_a3_b0_c2.vf");
  CHECK(formal_integral_space(X, 6, 2).dimension() == 1);
}

TEST_CASE("parameter promotion") {
  const auto X = test::corpus("lv_a3_b3_c2.vf");
  const auto ext = promote_parameter(X, "b");
  CHECK(ext.promoted == "b");
  CHECK(ext.field.vars().names() == Strings{"x", "y", "z", "b"});
  CHECK(ext.field.component(2) == P(ext.field, "z*(-b + 3*x^2)"));
  CHECK(ext.field.component(2).degree() == 3);
  CHECK(ext.field.component(3).is_zero());
  CHECK(ext.field.promoted() == Strings{"b"});

  CHECK_THROWS_AS(promote_parameter(X, "q"), Error);
  CHECK_THROWS_AS(promote_parameter(ext.field, "b"), Error);
}

TEST_CASE("formal integrals of the extended system are powers of b") {
  const auto ext = promote_parameter(test::corpus("lv_a3_b3_c2.vf"), "b");
  const auto space = formal_space_extended(ext, 4, 1);
  CHECK(test::strs(space.basis) == Strings{"1", "b", "b^2", "b^3", "b^4"});
  CHECK(depends_only_on_promoted(space, ext));
  CHECK(space.depends_only_on == Strings{"b"});

  CHECK(test::strs(formal_space_extended(ext, 1, 1).basis) == Strings{"1", "b"});
}

TEST_CASE("a = 0 control is recorded, not asserted") {
  const auto ext = promote_parameter(test::corpus("lv_a0_b3_c2.vf"), "b");
  const auto space = formal_space_extended(ext, 2, 1);
  MESSAGE("a = 0, c = 2, b promoted, N = 2: dimension " << space.dimension());
  CHECK(space.dimension() >= 3);
}

}  // TEST_SUITE
