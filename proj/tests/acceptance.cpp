// Acceptance runner: one PASS/FAIL line per criterion. With an argument,
// runs only that criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "darboux_lab/darboux.hpp"
#include "darboux_lab/numerics.hpp"
#include "darboux_lab/series.hpp"
#include "support.hpp"

using namespace dlab;
using dlab::test::P;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

using Strings = std::vector<std::string>;

Strings sorted_gs(const std::vector<ExpFactorCert>& certs) {
  Strings out;
  for (const auto& c : certs) out.push_back(c.g.str());
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Poly> cofactor_for(const std::vector<ExpFactorCert>& certs, const Poly& g) {
  for (const auto& c : certs)
    if (c.g == g) return c.cofactor;
  return std::nullopt;
}

void certificates(Outcome& o) {
  const auto X = test::corpus("samardzija_greller.vf");
  const Strings fs = {"x", "y", "z"};
  const Strings ks = {"1 - y + c*x - a*x*z", "-1 + x", "-b + a*x^2"};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto r = verify_darboux(X, P(X, fs[i]));
    const auto* c = std::get_if<DarbouxCert>(&r);
    o.expect(c && c->cofactor.str() == P(X, ks[i]).str(), "cofactor of " + fs[i]);
  }
  const auto e1 = verify_exp_factor(X, P(X, "x + z"), {0, 0, 0});
  const auto e2 = verify_exp_factor(X, P(X, "y"), {0, 0, 0});
  o.expect(std::holds_alternative<ExpFactorCert>(e1) &&
               std::get<ExpFactorCert>(e1).cofactor.str() == P(X, "c*x^2 - x*y - b*z + x").str(),
           "cofactor of exp(x + z)");
  o.expect(std::holds_alternative<ExpFactorCert>(e2) &&
               std::get<ExpFactorCert>(e2).cofactor.str() == P(X, "y*(x - 1)").str(),
           "cofactor of exp(y)");
  o.detail << "K_x, K_y, K_z, L(x+z), L(y) exact";
}

void darboux_search(Outcome& o) {
  const auto X = test::corpus("samardzija_greller.vf");
  const auto certs = search_darboux(X, 4, default_lattice(X, 4));
  const auto got = test::cert_polys(certs);
  o.expect(got == Strings({"x", "y", "z"}), "expected {x, y, z}");
  o.detail << "degree <= 4, lattice bound 4: {";
  for (std::size_t i = 0; i < got.size(); ++i) o.detail << (i ? ", " : "") << got[i];
  o.detail << "}";
}

void exp_factor_regimes(Outcome& o) {
  struct Regime {
    std::string file;
    Strings gs;
    std::vector<std::pair<std::string, std::string>> cofactors;
  };
  const std::vector<Regime> regimes = {
      {"lv_a3_b3_c2.vf", {"x + z", "y"}, {{"x + z", "c*x^2 - x*y - b*z + x"}, {"y", "y*(x - 1)"}}},
      {"lv_a3_b3_c0.vf",
       {"x + z", "x^2 + 2*x*y + 2*x*z + y^2 + 2*y*z + z^2", "y"},
       {{"(x + y + z)^2", "-2*(x + y + z)*(b*z - x + y)"}}},
      {"lv_a0_b3_c2.vf", {"z"}, {{"z", "-b*z"}}},
      {"lv_a0_b3_c0.vf", {"x + y", "z"}, {{"x + y", "x - y"}, {"z", "-b*z"}}},
      {"lv_a0_b0_c2.vf", {}, {}},
  };
  for (const auto& r : regimes) {
    const auto X = test::corpus(r.file);
    const auto found = search_exp_factors(X, 2, 1);
    o.expect(sorted_gs(found) == r.gs, r.file + " factor set");
    for (const auto& [g, l] : r.cofactors) o.expect(cofactor_for(found, P(X, g)) == P(X, l), r.file + " cofactor of " + g);
    o.detail << r.file << ": " << found.size() << "; ";
  }
  // The printed sign pattern for the (x+y+z)^2 cofactor is not a solution.
  const auto X0 = test::corpus("lv_a3_b3_c0.vf");
  const auto found = search_exp_factors(X0, 2, 1);
  o.expect(cofactor_for(found, P(X0, "(x + y + z)^2")) != P(X0, "-2*(x + y + z)*(b*z - x - y)"),
           "printed variant -2(x+y+z)(bz-x-y) must differ from the computed cofactor");
  o.detail << "(x+y+z)^2 cofactor -2(x+y+z)(bz-x+y), printed variant differs";
}

void integrable_case(Outcome& o) {
  const auto X = test::corpus("lv_a0_b0_c0.vf");
  const auto certs = coordinate_certificates(X);
  const auto e = std::get<ExpFactorCert>(verify_exp_factor(X, P(X, "x + y"), {0, 0, 0}));
  const auto fns = assemble_darboux_integrals(certs, {e});
  Strings described;
  for (const auto& f : fns) described.push_back(describe(f));
  o.expect(described == Strings({"x*y*exp(-(x + y))", "z"}), "kernel of dimension 2 giving H1 and H2");

  IntegratorOptions opt;
  opt.atol = opt.rtol = 1e-10;
  const std::vector<double> x0 = {0.5, 0.5, 1.0};
  const auto traj = simulate(X, x0, 100.0, opt);
  const auto h1 = conservation_drift(traj, ScalarFunction("H1", test::integrable_h1(X)));
  const auto h2 = conservation_drift(traj, ScalarFunction("H2", P(X, "z")));
  o.expect(h1.relative_drift <= 1e-6, "relative drift of H1 <= 1e-6");
  o.expect(h2.max_abs_drift == 0.0, "drift of z exactly 0");
  o.detail << "kernel dim " << fns.size() << ", H1 relative drift " << h1.relative_drift << ", z drift "
           << h2.max_abs_drift;
}

void obstruction(Outcome& o) {
  const auto X = test::corpus("lv_a3_b3_c2.vf");
  const auto fns = assemble_darboux_integrals(coordinate_certificates(X), search_exp_factors(X, 2, 1));
  o.expect(fns.empty(), "trivial cofactor-balance kernel");
  const auto ob = rational_obstruction(X, 4, default_lattice(X, 4));
  o.expect(ob.holds(), "rational obstruction to degree 4");
  o.detail << "kernel dim " << fns.size() << ", obstruction " << (ob.holds() ? "holds" : "fails") << " to degree 4";
}

void formal(Outcome& o) {
  const auto s14 = formal_integral_space(test::corpus("restricted_z0_c2.vf"), 8, 2);
  const auto sb0 = formal_integral_space(test::corpus("lv_a3_b0_c2.vf"), 6, 2);
  const auto ext = promote_parameter(test::corpus("lv_a3_b3_c2.vf"), "b");
  const auto s7 = formal_space_extended(ext, 4, 1);
  o.expect(s14.dimension() == 1, "plane z = 0, c = 2, N = 8, m = 2: dimension 1");
  o.expect(sb0.dimension() == 1, "b = 0, N = 6, m = 2: dimension 1");
  o.expect(test::strs(s7.basis) == Strings({"1", "b", "b^2", "b^3", "b^4"}), "extended system basis");
  o.detail << "dims " << s14.dimension() << ", " << sb0.dimension() << ", " << s7.dimension()
           << " (basis 1, b, ..., b^4)";
}

void chaos(Outcome& o) {
  const std::vector<double> x0 = {0.5, 1.0, 2.0};
  const double chaotic = lyapunov_max(test::corpus("samardzija_greller.vf"), x0, 2000.0, 0.5);
  const double integrable = lyapunov_max(test::corpus("lv_a0_b0_c0.vf"), x0, 2000.0, 0.5);
  o.expect(chaotic > 0.01, "lambda_max > 0.01 at a = 2.9851, b = 3, c = 2");
  o.expect(std::abs(integrable) <= 0.005, "|lambda_max| <= 0.005 at a = b = c = 0");
  o.detail << "lambda_max " << chaotic << " (chaotic parameters), " << integrable << " (integrable)";
}

void properties(Outcome& o) {
  for (const auto& r : test::all_properties(20240611)) {
    o.expect(r.failures == 0 && r.instances == 100, r.name + ": " + r.first_failure);
    o.detail << r.name << " " << r.instances - r.failures << "/" << r.instances << "; ";
  }
}

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "certificate reproduction", 1, certificates},
      {2, "Darboux polynomials at chaotic parameters", 60, darboux_search},
      {3, "exponential factor completeness", 60, exp_factor_regimes},
      {4, "integrable case a = b = c = 0", 1, integrable_case},
      {5, "no Darboux or rational integral at a = b = 3, c = 2", 10, obstruction},
      {6, "formal integral truncations", 120, formal},
      {7, "chaos indicator", 300, chaos},
      {8, "property suites", 600, properties},
  };
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  bool all = true;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_s) o.expect(false, "time limit " + std::to_string(c.limit_s) + " s");
    all = all && o.pass;
    std::printf("criterion %d %s: %s (%.3f s) %s\n", c.id, c.title, o.pass ? "PASS" : "FAIL", secs,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
