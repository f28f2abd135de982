#include "darboux_lab/analysis.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "darboux_lab/parallel.hpp"

namespace dlab {

namespace {

CofactorLattice lattice_for(const VectorField& field, const DarbouxOptions& opt) {
  return default_lattice(field, opt.lattice_bound.value_or(opt.degree));
}

void recheck(const VectorField& field, const std::vector<DarbouxCert>& certs) {
  for (const auto& c : certs)
    if (!certificate_holds(field, c))
      throw InvalidCertificate("certificate for " + c.f.str() + " failed re-verification");
}

void recheck(const VectorField& field, const std::vector<ExpFactorCert>& certs) {
  for (const auto& c : certs)
    if (!certificate_holds(field, c))
      throw InvalidCertificate("exponential factor with g = " + c.g.str() + " failed re-verification");
}

Json certs_json(const std::vector<DarbouxCert>& certs) {
  Json out = Json::array();
  for (const auto& c : certs) out.push_back(to_json(c));
  return out;
}

Json exp_json(const std::vector<ExpFactorCert>& certs) {
  Json out = Json::array();
  for (const auto& c : certs) out.push_back(to_json(c));
  return out;
}

std::map<std::string, Rational, std::less<>> param_map(const VectorField& field) {
  std::map<std::string, Rational, std::less<>> out;
  for (const auto& [name, value] : field.params()) out.emplace(name, value);
  return out;
}

Json integrator_json(const IntegratorOptions& o) {
  return {{"method", method_name(o.method)}, {"atol", o.atol}, {"rtol", o.rtol}, {"dt", o.dt}};
}

std::vector<double> initial_state(const VectorField& field, const std::vector<double>& x0) {
  if (x0.empty()) return default_initial_state(field);
  if (x0.size() != field.dimension())
    throw Error("--x0 has " + std::to_string(x0.size()) + " entries, the field has " +
                std::to_string(field.dimension()) + " variables");
  return x0;
}

struct Integrals {
  std::vector<DarbouxCert> certs;
  std::vector<ExpFactorCert> exp_factors;
  std::vector<DarbouxFunction> functions;
};

Integrals find_integrals(const VectorField& field, const IntegralOptions& opt) {
  Integrals out;
  out.certs = search_darboux(field, opt.darboux.degree, lattice_for(field, opt.darboux));
  out.exp_factors = search_exp_factors(field, opt.exp_factors.g_degree, opt.exp_factors.s_bound);
  recheck(field, out.certs);
  recheck(field, out.exp_factors);
  out.functions = assemble_darboux_integrals(out.certs, out.exp_factors);
  for (const auto& fn : out.functions)
    if (!cofactor_balance(fn).is_zero())
      throw InvalidCertificate("cofactor balance of " + describe(fn) + " is not zero");
  return out;
}

}  // namespace

std::vector<double> default_initial_state(const VectorField& field) {
  if (field.dimension() == 3) return {0.5, 1.0, 2.0};
  return std::vector<double>(field.dimension(), 0.5);
}

Json run_darboux(const VectorField& field, const DarbouxOptions& opt) {
  const auto lattice = lattice_for(field, opt);
  const auto certs = search_darboux(field, opt.degree, lattice);
  recheck(field, certs);
  return {{"degree", opt.degree},
          {"lattice", lattice_json(lattice)},
          {"certificates", certs_json(certs)},
          {"scope", "relative to lattice"}};
}

Json run_expfactors(const VectorField& field, const ExpFactorOptions& opt) {
  const auto denominators = coordinate_certificates(field);
  const auto found = search_exp_factors(field, opt.g_degree, opt.s_bound, denominators);
  recheck(field, found);
  Json den = Json::array();
  for (const auto& d : denominators) den.push_back(d.f.str());
  return {{"g_degree", opt.g_degree}, {"s_bound", opt.s_bound}, {"denominators", den}, {"exp_factors", exp_json(found)}};
}

Json run_integrals(const VectorField& field, const IntegralOptions& opt) {
  const Integrals found = find_integrals(field, opt);
  const auto obstruction = rational_obstruction(field, opt.darboux.degree, lattice_for(field, opt.darboux));
  Json fns = Json::array();
  for (const auto& fn : found.functions) fns.push_back(to_json(fn));
  std::string summary;
  if (found.functions.empty()) {
    summary = "no Darboux first integral from certificates; rational obstruction " +
              std::string(obstruction.holds() ? "holds" : "fails") + " to degree " +
              std::to_string(opt.darboux.degree);
  } else {
    summary = std::to_string(found.functions.size()) + " Darboux first integral" +
              (found.functions.size() == 1 ? "" : "s") + " from certificates";
  }
  return {{"certificates", certs_json(found.certs)},
          {"exp_factors", exp_json(found.exp_factors)},
          {"integrals", fns},
          {"rational_obstruction", to_json(obstruction)},
          {"summary", summary}};
}

Json run_formal(const VectorField& field, const FormalOptions& opt) {
  SeriesSpace space;
  Json promoted = nullptr;
  Json promoted_only = nullptr;
  const VectorField* solved = &field;
  std::optional<ExtendedField> ext;
  if (opt.promote) {
    ext = promote_parameter(field, *opt.promote);
    space = formal_space_extended(*ext, opt.order, opt.margin);
    promoted = ext->promoted;
    promoted_only = depends_only_on_promoted(space, *ext);
    solved = &ext->field;
  } else {
    space = formal_integral_space(field, opt.order, opt.margin);
  }
  for (const auto& f : space.basis) {
    const Poly xf = lie_derivative(*solved, f);
    for (const auto& t : xf.terms())
      if (t.monomial.degree() <= opt.order + opt.margin)
        throw InvalidCertificate("truncated integral " + f.str() + " failed re-verification");
  }
  Json j = to_json(space);
  j["promoted"] = promoted;
  j["promoted_only"] = promoted_only;
  j["vars"] = solved->vars().names();
  return j;
}

Json run_simulate(const VectorField& field, const SimulateOptions& opt) {
  const auto x0 = initial_state(field, opt.x0);
  std::vector<ScalarFunction> tracked;
  Json expressions = Json::array();
  const auto params = param_map(field);
  for (const auto& text : opt.integrals) {
    const Poly p = parse_poly(text, field.vars(), params);
    tracked.emplace_back("H" + std::to_string(tracked.size() + 1), p);
    expressions.push_back(p.str());
  }
  if (opt.darboux_integrals) {
    for (const auto& fn : find_integrals(field, opt.integral_search).functions) {
      tracked.emplace_back("H" + std::to_string(tracked.size() + 1), fn);
      expressions.push_back(describe(fn));
    }
  }
  const Trajectory traj = simulate(field, x0, opt.t_end, opt.integrator);
  Json drift = Json::array();
  for (std::size_t k = 0; k < tracked.size(); ++k) {
    Json d = to_json(conservation_drift(traj, tracked[k]));
    d["expression"] = expressions[k];
    drift.push_back(d);
  }
  Json csv = nullptr;
  if (opt.emit) {
    std::ofstream out(*opt.emit, std::ios::binary);
    if (!out) throw Error("cannot write '" + *opt.emit + "'");
    write_csv(out, traj, field.vars(), tracked);
    csv = *opt.emit;
  }
  return {{"method", method_name(traj.method)},
          {"t_end", opt.t_end},
          {"x0", x0},
          {"steps", {{"accepted", traj.accepted}, {"rejected", traj.rejected}, {"rhs_evals", traj.rhs_evals}}},
          {"final_time", traj.times.back()},
          {"final_state", traj.states.back()},
          {"drift", drift},
          {"csv", csv}};
}

Json run_lyapunov(const VectorField& field, const LyapunovOptions& opt) {
  const auto x0 = initial_state(field, opt.x0);
  const double value = lyapunov_max(field, x0, opt.t_end, opt.renorm_dt, opt.integrator);
  return {{"lyapunov_max", value},
          {"t_end", opt.t_end},
          {"renorm_dt", opt.renorm_dt},
          {"x0", x0},
          {"method", method_name(opt.integrator.method)}};
}

Json run_analyze(const VectorField& field, const AnalyzeOptions& opt) {
  std::vector<std::pair<std::string, std::function<Json()>>> tasks = {
      {"darboux", [&] { return run_darboux(field, opt.integrals.darboux); }},
      {"expfactors", [&] { return run_expfactors(field, opt.integrals.exp_factors); }},
      {"integrals", [&] { return run_integrals(field, opt.integrals); }},
      {"formal", [&] { return run_formal(field, opt.formal); }},
  };
  if (opt.simulate) tasks.emplace_back("simulate", [&] { return run_simulate(field, *opt.simulate); });
  if (opt.lyapunov) tasks.emplace_back("lyapunov", [&] { return run_lyapunov(field, *opt.lyapunov); });
  const auto results = ordered_map(tasks.size(), [&](std::size_t i) { return tasks[i].second(); });
  Json out = Json::object();
  for (std::size_t i = 0; i < tasks.size(); ++i) out[tasks[i].first] = results[i];
  return out;
}

Json config(const DarbouxOptions& opt) {
  return {{"degree", opt.degree}, {"lattice_bound", opt.lattice_bound.value_or(opt.degree)}};
}

Json config(const ExpFactorOptions& opt) { return {{"g_degree", opt.g_degree}, {"s_bound", opt.s_bound}}; }

Json config(const IntegralOptions& opt) {
  Json j = config(opt.darboux);
  j.update(config(opt.exp_factors));
  return j;
}

Json config(const FormalOptions& opt) {
  return {{"order", opt.order},
          {"margin", opt.margin},
          {"promote", opt.promote ? Json(*opt.promote) : Json(nullptr)}};
}

Json config(const SimulateOptions& opt) {
  Json j = {{"x0", opt.x0},
            {"t_end", opt.t_end},
            {"integrator", integrator_json(opt.integrator)},
            {"integrals", opt.integrals},
            {"darboux_integrals", opt.darboux_integrals},
            {"emit", opt.emit ? Json(*opt.emit) : Json(nullptr)}};
  if (opt.darboux_integrals) j["integral_search"] = config(opt.integral_search);
  return j;
}

Json config(const LyapunovOptions& opt) {
  return {{"x0", opt.x0},
          {"t_end", opt.t_end},
          {"renorm_dt", opt.renorm_dt},
          {"integrator", integrator_json(opt.integrator)}};
}

Json config(const AnalyzeOptions& opt) {
  Json j = {{"integrals", config(opt.integrals)}, {"formal", config(opt.formal)}};
  if (opt.simulate) j["simulate"] = config(*opt.simulate);
  if (opt.lyapunov) j["lyapunov"] = config(*opt.lyapunov);
  return j;
}

}  // namespace dlab
