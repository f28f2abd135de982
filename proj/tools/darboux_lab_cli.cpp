#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "darboux_lab/analysis.hpp"

namespace {

using dlab::Json;

struct Common {
  std::string file;
  std::string format = "json";
};

struct IntegratorFlags {
  std::optional<double> tol;
  std::optional<double> dt;
  std::optional<std::string> method;

  dlab::IntegratorOptions options() const {
    dlab::IntegratorOptions o;
    if (tol) o.atol = o.rtol = *tol;
    if (dt) o.dt = *dt;
    if (method) o.method = *method == "rk4" ? dlab::Method::RK4 : dlab::Method::DormandPrince45;
    else if (dt && !tol) o.method = dlab::Method::RK4;
    return o;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("file", c.file, "field file (.vf)")->required();
  cmd->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}));
}

void add_darboux(CLI::App* cmd, dlab::DarbouxOptions& o) {
  cmd->add_option("--degree", o.degree, "maximum degree of f")->check(CLI::Range(0u, 12u));
  cmd->add_option("--lattice-bound", o.lattice_bound, "bound on lattice coefficients (default: degree)");
}

void add_expfactors(CLI::App* cmd, dlab::ExpFactorOptions& o) {
  cmd->add_option("--g-degree", o.g_degree, "maximum degree of g")->check(CLI::Range(0u, 12u));
  cmd->add_option("--s-bound", o.s_bound, "maximum exponent of each denominator factor")->check(CLI::Range(0u, 6u));
}

void add_integrator(CLI::App* cmd, IntegratorFlags& f) {
  cmd->add_option("--tol", f.tol, "absolute and relative tolerance of the adaptive pair")->check(CLI::PositiveNumber);
  cmd->add_option("--dt", f.dt, "fixed step (rk4) or initial step")->check(CLI::PositiveNumber);
  cmd->add_option("--method", f.method, "rk4 or dopri45")->check(CLI::IsMember({"rk4", "dopri45"}));
}

void add_x0(CLI::App* cmd, std::vector<double>& x0, double& t_end) {
  cmd->add_option("--x0", x0, "initial state, comma separated")->delimiter(',');
  cmd->add_option("--t-end", t_end, "final time")->check(CLI::PositiveNumber);
}

void emit(const Json& report, const std::string& format) {
  if (format == "text") std::cout << dlab::render_text(report);
  else std::cout << report.dump(2) << "\n";
}

std::vector<unsigned> parse_s(const std::string& text) {
  std::vector<unsigned> s;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    long v = -1;
    try {
      v = std::stol(item, &used);
    } catch (const std::exception&) {
    }
    if (v < 0 || used != item.size()) throw dlab::Error("--s expects non-negative integers, got '" + text + "'");
    s.push_back(static_cast<unsigned>(v));
  }
  return s;
}

Json verify_report(const dlab::VectorField& field, const std::optional<std::string>& poly,
                   const std::optional<std::string>& g, const std::string& s_text, bool& valid) {
  std::map<std::string, dlab::Rational, std::less<>> params(field.params().begin(), field.params().end());
  Json r;
  if (poly) {
    r["kind"] = "darboux";
    const auto f = dlab::parse_poly(*poly, field.vars(), params);
    const auto out = dlab::verify_darboux(field, f);
    if (const auto* cert = std::get_if<dlab::DarbouxCert>(&out)) {
      valid = dlab::certificate_holds(field, *cert);
      if (!valid) throw dlab::InvalidCertificate("derived cofactor failed re-verification");
      r.update({{"valid", true}, {"certificate", dlab::to_json(*cert)}, {"reason", nullptr}, {"remainder", nullptr}});
    } else {
      valid = false;
      r.update({{"valid", false},
                {"certificate", nullptr},
                {"reason", "X f is not divisible by f"},
                {"remainder", std::get<dlab::NotDarboux>(out).remainder.str()}});
    }
    return r;
  }
  r["kind"] = "exponential factor";
  const auto gp = dlab::parse_poly(*g, field.vars(), params);
  auto s = parse_s(s_text);
  if (s.empty()) s.assign(dlab::coordinate_certificates(field).size(), 0);
  const auto out = dlab::verify_exp_factor(field, gp, s);
  if (const auto* cert = std::get_if<dlab::ExpFactorCert>(&out)) {
    valid = dlab::certificate_holds(field, *cert);
    if (!valid) throw dlab::InvalidCertificate("derived cofactor failed re-verification");
    r.update({{"valid", true}, {"certificate", dlab::to_json(*cert)}, {"reason", nullptr}, {"remainder", nullptr}});
  } else {
    valid = false;
    const auto& nf = std::get<dlab::NotExpFactor>(out);
    r.update({{"valid", false},
              {"certificate", nullptr},
              {"reason", nf.reason},
              {"remainder", nf.remainder.is_zero() ? Json(nullptr) : Json(nf.remainder.str())}});
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Darboux polynomials, exponential factors, first integrals and trajectories of polynomial vector fields"};
  app.set_version_flag("--version", std::string(dlab::kToolVersion));
  app.require_subcommand(1);

  Common common;
  dlab::DarbouxOptions darboux_opt;
  dlab::ExpFactorOptions exp_opt;
  dlab::FormalOptions formal_opt;
  dlab::SimulateOptions sim_opt;
  dlab::LyapunovOptions lyap_opt;
  IntegratorFlags integ;
  bool numerics = false;
  std::optional<std::string> verify_poly, verify_g;
  std::string verify_s;

  auto* darboux = app.add_subcommand("darboux", "Darboux polynomials with cofactors in the default lattice");
  add_common(darboux, common);
  add_darboux(darboux, darboux_opt);

  auto* expfactors = app.add_subcommand("expfactors", "exponential factors over the coordinate planes");
  add_common(expfactors, common);
  add_expfactors(expfactors, exp_opt);

  auto* integrals = app.add_subcommand("integrals", "Darboux first integrals and the rational obstruction");
  add_common(integrals, common);
  add_darboux(integrals, darboux_opt);
  add_expfactors(integrals, exp_opt);

  auto* formal = app.add_subcommand("formal", "truncated formal first integrals");
  add_common(formal, common);
  formal->add_option("--order", formal_opt.order, "truncation order N")->check(CLI::Range(1u, 20u));
  formal->add_option("--margin", formal_opt.margin, "extra obstruction degrees m")->check(CLI::Range(0u, 10u));
  formal->add_option("--promote", formal_opt.promote, "parameter to treat as a variable");

  auto* simulate = app.add_subcommand("simulate", "integrate a trajectory and track conserved quantities");
  add_common(simulate, common);
  add_x0(simulate, sim_opt.x0, sim_opt.t_end);
  add_integrator(simulate, integ);
  simulate->add_option("--integral", sim_opt.integrals, "polynomial to track (repeatable)");
  simulate->add_flag("--darboux-integrals", sim_opt.darboux_integrals, "also track the Darboux first integrals");
  simulate->add_option("--emit", sim_opt.emit, "CSV output path");
  add_darboux(simulate, darboux_opt);
  add_expfactors(simulate, exp_opt);

  auto* lyapunov = app.add_subcommand("lyapunov", "largest Lyapunov exponent");
  add_common(lyapunov, common);
  add_x0(lyapunov, lyap_opt.x0, lyap_opt.t_end);
  add_integrator(lyapunov, integ);
  lyapunov->add_option("--renorm-dt", lyap_opt.renorm_dt, "renormalization interval")->check(CLI::PositiveNumber);

  auto* analyze = app.add_subcommand("analyze", "run every analysis on one file");
  add_common(analyze, common);
  add_darboux(analyze, darboux_opt);
  add_expfactors(analyze, exp_opt);
  analyze->add_option("--order", formal_opt.order, "truncation order N")->check(CLI::Range(1u, 20u));
  analyze->add_option("--margin", formal_opt.margin, "extra obstruction degrees m")->check(CLI::Range(0u, 10u));
  analyze->add_option("--promote", formal_opt.promote, "parameter to treat as a variable");
  analyze->add_option("--x0", sim_opt.x0, "initial state; enables simulation and the Lyapunov exponent")
      ->delimiter(',');
  analyze->add_option("--t-end", sim_opt.t_end, "final time")->check(CLI::PositiveNumber);
  add_integrator(analyze, integ);
  analyze->add_option("--renorm-dt", lyap_opt.renorm_dt, "renormalization interval")->check(CLI::PositiveNumber);
  analyze->add_flag("--numerics", numerics, "simulate from the default initial state when --x0 is absent");

  auto* verify = app.add_subcommand("verify", "check one Darboux polynomial or exponential factor");
  add_common(verify, common);
  auto* poly_opt = verify->add_option("--poly", verify_poly, "candidate Darboux polynomial");
  auto* g_opt = verify->add_option("--g", verify_g, "numerator of an exponential factor");
  verify->add_option("--s", verify_s, "denominator exponents, comma separated")->needs(g_opt);
  poly_opt->excludes(g_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "darboux-lab: " << e.what() << "\n";
    return 2;
  }

  try {
    const auto field = dlab::load_field(common.file);
    const auto integrator = integ.options();
    dlab::IntegralOptions integral_opt{darboux_opt, exp_opt};
    std::string command;
    Json config, result;
    int status = 0;
    if (darboux->parsed()) {
      command = "darboux";
      config = dlab::config(darboux_opt);
      result = dlab::run_darboux(field, darboux_opt);
    } else if (expfactors->parsed()) {
      command = "expfactors";
      config = dlab::config(exp_opt);
      result = dlab::run_expfactors(field, exp_opt);
    } else if (integrals->parsed()) {
      command = "integrals";
      config = dlab::config(integral_opt);
      result = dlab::run_integrals(field, integral_opt);
    } else if (formal->parsed()) {
      command = "formal";
      config = dlab::config(formal_opt);
      result = dlab::run_formal(field, formal_opt);
    } else if (simulate->parsed()) {
      command = "simulate";
      sim_opt.integrator = integrator;
      sim_opt.integral_search = integral_opt;
      config = dlab::config(sim_opt);
      result = dlab::run_simulate(field, sim_opt);
    } else if (lyapunov->parsed()) {
      command = "lyapunov";
      lyap_opt.integrator = integrator;
      config = dlab::config(lyap_opt);
      result = dlab::run_lyapunov(field, lyap_opt);
    } else if (analyze->parsed()) {
      command = "analyze";
      dlab::AnalyzeOptions opt{integral_opt, formal_opt, std::nullopt, std::nullopt};
      if (!sim_opt.x0.empty() || numerics) {
        sim_opt.integrator = integrator;
        opt.simulate = sim_opt;
        lyap_opt.x0 = sim_opt.x0;
        lyap_opt.integrator = integrator;
        opt.lyapunov = lyap_opt;
      }
      config = dlab::config(opt);
      result = dlab::run_analyze(field, opt);
    } else {
      command = "verify";
      if (!verify_poly && !verify_g) throw dlab::Error("verify needs --poly or --g");
      bool valid = false;
      config = {{"poly", verify_poly ? Json(*verify_poly) : Json(nullptr)},
                {"g", verify_g ? Json(*verify_g) : Json(nullptr)},
                {"s", verify_s}};
      result = verify_report(field, verify_poly, verify_g, verify_s, valid);
      status = valid ? 0 : 1;
    }
    emit(dlab::make_report(command, config, field, result), common.format);
    return status;
  } catch (const dlab::InvalidCertificate& e) {
    std::cerr << "darboux-lab: invalid certificate: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "darboux-lab: " << e.what() << "\n";
    return 2;
  }
}
