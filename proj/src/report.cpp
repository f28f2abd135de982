#include "darboux_lab/report.hpp"

#include <sstream>

namespace dlab {

Json field_json(const VectorField& field) {
  Json j;
  j["vars"] = field.vars().names();
  Json params = Json::object();
  for (const auto& [name, value] : field.params()) params[name] = value.str();
  j["params"] = params;
  Json comps = Json::object();
  for (std::size_t i = 0; i < field.dimension(); ++i) comps[field.vars()[i]] = field.component(i).str();
  j["components"] = comps;
  j["degree"] = field.degree();
  j["promoted"] = field.promoted();
  j["zeroed"] = field.zeroed();
  return j;
}

Json lattice_json(const CofactorLattice& lattice) {
  Json gens = Json::array();
  for (const auto& g : lattice.generators) gens.push_back(g.str());
  return {{"bound", lattice.bound}, {"generators", gens}};
}

Json to_json(const DarbouxCert& cert) { return {{"poly", cert.f.str()}, {"cofactor", cert.cofactor.str()}}; }

Json to_json(const ExpFactorCert& cert) {
  Json den = Json::array();
  for (const auto& d : cert.denominators) den.push_back(d.str());
  return {{"g", cert.g.str()}, {"s", cert.s}, {"L", cert.cofactor.str()}, {"denominators", den}};
}

Json to_json(const DarbouxFunction& fn) {
  Json d = Json::array();
  for (const auto& [cert, lambda] : fn.darboux_terms) d.push_back({{"poly", cert.f.str()}, {"exponent", lambda.str()}});
  Json e = Json::array();
  for (const auto& [cert, mu] : fn.exp_terms)
    e.push_back({{"g", cert.g.str()}, {"s", cert.s}, {"exponent", mu.str()}});
  return {{"expression", describe(fn)}, {"darboux_terms", d}, {"exp_terms", e}};
}

Json to_json(const RationalObstruction& ob) {
  Json pis = Json::array();
  for (const auto& p : ob.polynomial_integrals) pis.push_back(p.str());
  Json shared = Json::array();
  for (const auto& s : ob.shared_cofactors) {
    Json basis = Json::array();
    for (const auto& p : s.basis) basis.push_back(p.str());
    shared.push_back({{"cofactor", s.cofactor.str()}, {"basis", basis}});
  }
  return {{"degree", ob.degree},
          {"lattice_bound", ob.lattice_bound},
          {"holds", ob.holds()},
          {"polynomial_integrals", pis},
          {"shared_cofactors", shared}};
}

Json to_json(const SeriesSpace& space) {
  Json basis = Json::array();
  for (const auto& p : space.basis) basis.push_back(p.str());
  Json j = {{"N", space.order}, {"margin", space.margin}, {"dimension", space.dimension()}, {"basis", basis}};
  j["depends_only_on"] = space.depends_only_on ? Json(*space.depends_only_on) : Json(nullptr);
  return j;
}

Json to_json(const DriftReport& drift) {
  return {{"id", drift.id}, {"max_abs_drift", drift.max_abs_drift}, {"relative_drift", drift.relative_drift}};
}

Json make_report(const std::string& command, Json config, const VectorField& field, Json result) {
  return {{"command", command},
          {"config", std::move(config)},
          {"field", field_json(field)},
          {"result", std::move(result)},
          {"tool", {{"name", kToolName}, {"version", kToolVersion}}}};
}

namespace {

std::string str(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

std::string join(const Json& list, const std::string& sep) {
  std::string out;
  for (const auto& v : list) out += (out.empty() ? "" : sep) + str(v);
  return out;
}

void render_darboux(std::ostream& out, const Json& r) {
  out << "Darboux polynomials (degree <= " << r["degree"] << ", lattice bound " << r["lattice"]["bound"]
      << ", relative to lattice):\n";
  for (const auto& c : r["certificates"]) out << "  " << str(c["poly"]) << "    cofactor " << str(c["cofactor"]) << "\n";
}

void render_expfactors(std::ostream& out, const Json& r) {
  out << "Exponential factors (deg g <= " << r["g_degree"] << ", s_i <= " << r["s_bound"] << "; denominators "
      << join(r["denominators"], ", ") << "):\n";
  if (r["exp_factors"].empty()) out << "  none\n";
  for (const auto& e : r["exp_factors"])
    out << "  g = " << str(e["g"]) << ", s = " << e["s"].dump() << "    L = " << str(e["L"]) << "\n";
}

void render_integrals(std::ostream& out, const Json& r) {
  out << "Darboux first integrals from " << r["certificates"].size() << " certificates and "
      << r["exp_factors"].size() << " exponential factors:\n";
  if (r["integrals"].empty()) out << "  none\n";
  for (const auto& h : r["integrals"]) out << "  H = " << str(h["expression"]) << "\n";
  const auto& ob = r["rational_obstruction"];
  out << "Rational obstruction to degree " << ob["degree"] << " (lattice bound " << ob["lattice_bound"]
      << "): " << (ob["holds"].get<bool>() ? "holds" : "fails") << "\n";
  for (const auto& p : ob["polynomial_integrals"]) out << "  polynomial first integral " << str(p) << "\n";
  for (const auto& s : ob["shared_cofactors"])
    out << "  cofactor " << str(s["cofactor"]) << " shared by " << join(s["basis"], "; ") << "\n";
  out << str(r["summary"]) << "\n";
}

void render_formal(std::ostream& out, const Json& r) {
  out << "Truncated formal first integrals (N = " << r["N"] << ", margin " << r["margin"]
      << "): truncated space dimension " << r["dimension"] << "\n";
  for (const auto& p : r["basis"]) out << "  " << str(p) << "\n";
  if (!r["promoted"].is_null())
    out << "  every basis element depends only on " << str(r["promoted"]) << ": "
        << (r["promoted_only"].get<bool>() ? "yes" : "no") << "\n";
}

void render_simulate(std::ostream& out, const Json& r) {
  out << "Trajectory (" << str(r["method"]) << ") to t = " << r["t_end"] << ": " << r["steps"]["accepted"]
      << " accepted steps, " << r["steps"]["rejected"] << " rejected\n";
  out << "  final state " << r["final_state"].dump() << "\n";
  for (const auto& d : r["drift"])
    out << "  drift of " << str(d["id"]) << ": max abs " << d["max_abs_drift"] << ", relative " << d["relative_drift"]
        << "\n";
  if (!r["csv"].is_null()) out << "  CSV written to " << str(r["csv"]) << "\n";
}

void render_lyapunov(std::ostream& out, const Json& r) {
  out << "Largest Lyapunov exponent (" << str(r["method"]) << ", t_end " << r["t_end"] << ", renorm_dt "
      << r["renorm_dt"] << "): " << r["lyapunov_max"] << "\n";
}

void render_verify(std::ostream& out, const Json& r) {
  if (r["valid"].get<bool>()) {
    out << "valid " << str(r["kind"]) << " certificate\n";
    for (const auto& [k, v] : r["certificate"].items()) out << "  " << k << ": " << (v.is_string() ? str(v) : v.dump()) << "\n";
  } else {
    out << "not a " << str(r["kind"]) << " certificate: " << str(r["reason"]) << "\n";
    if (!r["remainder"].is_null()) out << "  remainder " << str(r["remainder"]) << "\n";
  }
}

void render_section(std::ostream& out, const std::string& command, const Json& r) {
  if (command == "darboux") render_darboux(out, r);
  else if (command == "expfactors") render_expfactors(out, r);
  else if (command == "integrals") render_integrals(out, r);
  else if (command == "formal") render_formal(out, r);
  else if (command == "simulate") render_simulate(out, r);
  else if (command == "lyapunov") render_lyapunov(out, r);
  else if (command == "verify") render_verify(out, r);
}

}  // namespace

std::string render_text(const Json& report) {
  std::ostringstream out;
  const auto& f = report["field"];
  out << "field: vars " << join(f["vars"], " ") << "; degree " << f["degree"];
  if (!f["params"].empty()) {
    out << "; params";
    for (const auto& [k, v] : f["params"].items()) out << " " << k << "=" << str(v);
  }
  out << "\n";
  for (const auto& var : f["vars"]) out << "  d" << str(var) << "/dt = " << str(f["components"][str(var)]) << "\n";
  const std::string command = report["command"];
  if (command == "analyze") {
    for (const char* part : {"darboux", "expfactors", "integrals", "formal", "simulate", "lyapunov"})
      if (report["result"].contains(part)) render_section(out, part, report["result"][part]);
  } else {
    render_section(out, command, report["result"]);
  }
  return out.str();
}

}  // namespace dlab
