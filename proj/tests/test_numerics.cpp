#include <doctest.h>

#include <cmath>
#include <sstream>

#include "darboux_lab/numerics.hpp"
#include "support.hpp"

using namespace dlab;
using dlab::test::P;

TEST_SUITE("numerics") {

TEST_CASE("compiled evaluation matches exact evaluation") {
  const auto X = test::reference_system("29851/10000", "3", "2");
  const CompiledField cf(X);
  const std::vector<Rational> exact = {Rational(1) / 2, Rational(3) / 4, Rational(-5) / 4};
  const std::vector<double> x = {0.5, 0.75, -1.25};
  std::vector<double> out(3);
  cf.rhs(x, out);
  for (std::size_t i = 0; i < 3; ++i) CHECK(out[i] == doctest::Approx(X.component(i).evaluate(exact).to_double()).epsilon(1e-15));

  std::vector<double> jac(9);
  cf.jacobian(x, jac);
  // d(x')/dy = -x
  CHECK(jac[1] == -0.5);
  // d(y')/dx = y
  CHECK(jac[3] == 0.75);
}

TEST_CASE("plane x = 0 is preserved bit for bit") {
  const auto X = test::reference_system("29851/10000", "3", "2");
  const std::vector<double> x0 = {0.0, 1.0, 2.0};
  const auto traj = simulate(X, x0, 20.0);
  for (const auto& s : traj.states) REQUIRE(s[0] == 0.0);
  CHECK(std::signbit(traj.states.back()[0]) == false);
}

TEST_CASE("integrable case") {
  const auto X = test::corpus("lv_a0_b0_c0.vf");
  const std::vector<double> x0 = {0.5, 0.5, 1.0};
  const auto traj = simulate(X, x0, 100.0);
  CHECK(traj.times.back() == 100.0);
  for (std::size_t i = 1; i < traj.times.size(); ++i) REQUIRE(traj.times[i] > traj.times[i - 1]);
  for (const auto& s : traj.states) REQUIRE(s[2] == 1.0);

  const auto h1 = conservation_drift(traj, ScalarFunction("H1", test::integrable_h1(X)));
  CHECK(h1.relative_drift <= 1e-6);
  CHECK(h1.max_abs_drift >= 0);
  const auto h2 = conservation_drift(traj, ScalarFunction("H2", P(X, "z")));
  CHECK(h2.max_abs_drift == 0.0);
}

TEST_CASE("H1 is not conserved at chaotic parameters") {
  const auto X0 = test::corpus("lv_a0_b0_c0.vf");
  const auto X = test::corpus("samardzija_greller.vf");
  const std::vector<double> x0 = {0.5, 1.0, 2.0};
  const auto traj = simulate(X, x0, 200.0);
  double biggest = 0;
  for (const auto& s : traj.states)
    for (double v : s) biggest = std::max(biggest, std::abs(v));
  CHECK(std::isfinite(biggest));
  CHECK(biggest < 100.0);
  const auto drift = conservation_drift(traj, ScalarFunction("H1", test::integrable_h1(X0)));
  CHECK(drift.relative_drift >= 0.01);
}

TEST_CASE("fixed-step RK4") {
  const auto X = test::corpus("linear_growth.vf");
  IntegratorOptions opt;
  opt.method = Method::RK4;
  opt.dt = 0.01;
  const std::vector<double> x0 = {1.0};
  const auto traj = simulate(X, x0, 1.0, opt);
  CHECK(traj.accepted == 100);
  CHECK(traj.rejected == 0);
  CHECK(traj.states.back()[0] == doctest::Approx(std::exp(2.0)).epsilon(1e-8));
  CHECK(method_name(traj.method) == "rk4");
}

TEST_CASE("blow-up is diagnosed") {
  const auto X = parse_field("vars: x\ndx/dt = x^2\n");
  const std::vector<double> x0 = {1.0};
  try {
    simulate(X, x0, 2.0);
    FAIL("integrated through a singularity");
  } catch (const NonFinite& e) {
    CHECK(e.time() <= 1.0 + 1e-3);
  }
}

TEST_CASE("evaluation domain") {
  const auto X = test::corpus("restricted_y0_a0.vf");
  const auto x = std::get<DarbouxCert>(verify_darboux(X, P(X, "x")));
  const auto z = std::get<DarbouxCert>(verify_darboux(X, P(X, "z")));
  const DarbouxFunction inv{{{x, Rational(-1)}, {z, Rational(1)}}, {}};
  const ScalarFunction h("h", inv);
  const std::vector<double> ok = {2.0, 3.0}, bad = {0.0, 3.0};
  CHECK(h(ok) == 1.5);
  CHECK_THROWS_AS(h(bad), EvalDomain);
  const DarbouxFunction root{{{x, Rational(1) / 2}}, {}};
  const std::vector<double> neg = {-1.0, 1.0};
  CHECK_THROWS_AS(ScalarFunction("r", root)(neg), EvalDomain);
}

TEST_CASE("CSV output") {
  const auto X = test::corpus("lv_a0_b0_c0.vf");
  IntegratorOptions opt;
  opt.method = Method::RK4;
  opt.dt = 0.5;
  const std::vector<double> x0 = {0.5, 0.5, 1.0};
  const auto traj = simulate(X, x0, 1.0, opt);
  std::ostringstream out;
  write_csv(out, traj, X.vars(), {ScalarFunction("H2", P(X, "z"))});
  const std::string csv = out.str();
  CHECK(csv.rfind("t,x,y,z,H2\n0,0.5,0.5,1,1\n0.5,", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  // 17 significant digits round-trip.
  const auto second = csv.substr(csv.find("\n0.5,") + 5);
  CHECK(std::stod(second.substr(0, second.find(','))) == traj.states[1][0]);
}

TEST_CASE("Lyapunov exponents") {
  SUBCASE("linear growth") {
    const auto X = test::corpus("linear_growth.vf");
    const std::vector<double> x0 = {0.5};
    CHECK(lyapunov_max(X, x0, 100.0, 0.5) == doctest::Approx(2.0).epsilon(5e-4));
  }
  SUBCASE("integrable case") {
    const auto X = test::corpus("lv_a0_b0_c0.vf");
    const std::vector<double> x0 = {0.5, 1.0, 2.0};
    CHECK(std::abs(lyapunov_max(X, x0, 2000.0, 0.5)) <= 0.005);
  }
  SUBCASE("deterministic") {
    const auto X = test::corpus("samardzija_greller.vf");
    const std::vector<double> x0 = {0.5, 1.0, 2.0};
    CHECK(lyapunov_max(X, x0, 50.0, 0.5) == lyapunov_max(X, x0, 50.0, 0.5));
  }
}

}  // TEST_SUITE
