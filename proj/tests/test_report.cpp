#include <doctest.h>

#include <cstdlib>

#include "darboux_lab/analysis.hpp"
#include "support.hpp"

using namespace dlab;

TEST_SUITE("cli") {

TEST_CASE("report envelope") {
  const auto X = test::corpus("samardzija_greller.vf");
  const DarbouxOptions opt{4, std::nullopt};
  const Json report = make_report("darboux", config(opt), X, run_darboux(X, opt));
  CHECK(report["command"] == "darboux");
  CHECK(report["tool"]["name"] == "darboux-lab");
  CHECK(report["tool"]["version"] == kToolVersion);
  CHECK(report["config"]["lattice_bound"] == 4);
  CHECK(report["field"]["params"]["a"] == "29851/10000");
  CHECK(report["field"]["components"]["y"] == "x*y - y");
  std::vector<std::string> polys;
  for (const auto& c : report["result"]["certificates"]) polys.push_back(c["poly"]);
  CHECK(polys == std::vector<std::string>{"x", "y", "z"});
  // Key order is sorted, so the dump is byte-stable.
  CHECK(report.dump(2) == make_report("darboux", config(opt), X, run_darboux(X, opt)).dump(2));
}

TEST_CASE("integral summaries") {
  IntegralOptions opt;
  opt.darboux.degree = 4;
  const auto chaotic = run_integrals(test::corpus("samardzija_greller.vf"), opt);
  CHECK(chaotic["summary"] == "no Darboux first integral from certificates; rational obstruction holds to degree 4");
  CHECK(chaotic["integrals"].empty());
  CHECK(chaotic["rational_obstruction"]["holds"] == true);

  const auto integrable = run_integrals(test::corpus("lv_a0_b0_c0.vf"), IntegralOptions{});
  std::vector<std::string> expressions;
  for (const auto& h : integrable["integrals"]) expressions.push_back(h["expression"]);
  CHECK(expressions == std::vector<std::string>{"x*y*exp(-(x + y))", "z"});

  const auto restricted = run_integrals(test::corpus("restricted_y0_a0.vf"), IntegralOptions{});
  REQUIRE(restricted["integrals"].size() == 1);
  CHECK(restricted["integrals"][0]["expression"] == "x^3*(x + 1/2)^(-3)*z");
}

TEST_CASE("exponential factor report") {
  const auto r = run_expfactors(test::corpus("lv_a3_b3_c0.vf"), ExpFactorOptions{});
  CHECK(r["denominators"] == Json::array({"x", "y", "z"}));
  CHECK(r["exp_factors"].size() == 3);
  CHECK(r["exp_factors"][0]["L"] == "2*x^2 - 4*x*z - 2*y^2 - 8*y*z - 6*z^2");
}

TEST_CASE("formal report") {
  FormalOptions opt;
  opt.order = 4;
  opt.margin = 1;
  opt.promote = "b";
  const auto r = run_formal(test::corpus("lv_a3_b3_c2.vf"), opt);
  CHECK(r["dimension"] == 5);
  CHECK(r["promoted"] == "b");
  CHECK(r["promoted_only"] == true);
  CHECK(r["vars"] == Json::array({"x", "y", "z", "b"}));
}

TEST_CASE("simulation report") {
  SimulateOptions opt;
  opt.x0 = {0.5, 0.5, 1.0};
  opt.t_end = 20;
  opt.integrals = {"z"};
  opt.darboux_integrals = true;
  const auto r = run_simulate(test::corpus("lv_a0_b0_c0.vf"), opt);
  REQUIRE(r["drift"].size() == 3);
  CHECK(r["drift"][0]["expression"] == "z");
  CHECK(r["drift"][0]["max_abs_drift"] == 0.0);
  CHECK(r["drift"][1]["id"] == "H2");
  CHECK(r["drift"][1]["relative_drift"].get<double>() <= 1e-6);
  CHECK(r["method"] == "dopri45");
  CHECK(r["csv"].is_null());

  opt.x0 = {1.0};
  CHECK_THROWS_AS(run_simulate(test::corpus("lv_a0_b0_c0.vf"), opt), Error);
}

TEST_CASE("analyze is independent of the worker count") {
  AnalyzeOptions opt;
  opt.formal.order = 4;
  const auto X = test::corpus("lv_a0_b0_c0.vf");
  setenv("DARBOUX_LAB_THREADS", "1", 1);
  const auto serial = run_analyze(X, opt).dump();
  setenv("DARBOUX_LAB_THREADS", "4", 1);
  const auto parallel = run_analyze(X, opt).dump();
  unsetenv("DARBOUX_LAB_THREADS");
  CHECK(serial == parallel);
  const auto j = Json::parse(serial);
  CHECK(j.contains("darboux"));
  CHECK(j.contains("formal"));
  CHECK_FALSE(j.contains("simulate"));
}

TEST_CASE("text rendering") {
  const auto X = test::corpus("lv_a0_b0_c0.vf");
  const auto text = render_text(make_report("integrals", config(IntegralOptions{}), X, run_integrals(X, IntegralOptions{})));
  CHECK(text.find("H = x*y*exp(-(x + y))") != std::string::npos);
  CHECK(text.find("dz/dt = 0") != std::string::npos);
  CHECK(text.find("2 Darboux first integrals from certificates") != std::string::npos);
}

}  // TEST_SUITE
