#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "darboux_lab/analysis.hpp"

namespace py = pybind11;
using namespace dlab;

namespace {

Method parse_method(const std::string& name) {
  if (name == "rk4") return Method::RK4;
  if (name == "dopri45") return Method::DormandPrince45;
  throw py::value_error("method must be 'rk4' or 'dopri45'");
}

IntegratorOptions integrator(const std::string& method, double tol, double dt) {
  IntegratorOptions o;
  o.method = parse_method(method);
  o.atol = o.rtol = tol;
  o.dt = dt;
  return o;
}

Poly poly_of(const VectorField& field, const std::string& text) {
  std::map<std::string, Rational, std::less<>> params(field.params().begin(), field.params().end());
  return parse_poly(text, field.vars(), params);
}

std::string report(const std::string& command, const Json& config, const VectorField& field, const Json& result) {
  return make_report(command, config, field, result).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact Darboux analysis and float64 integration of polynomial vector fields";
  m.attr("__version__") = kToolVersion;

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<InvalidCertificate>(m, "InvalidCertificate", error.ptr());
  py::register_exception<NonFinite>(m, "NonFinite", error.ptr());
  py::register_exception<EvalDomain>(m, "EvalDomain", error.ptr());

  py::class_<VectorField>(m, "Field")
      .def_static("load", &load_field, py::arg("path"))
      .def_static("parse", [](const std::string& text) { return parse_field(text); }, py::arg("text"))
      .def_property_readonly("vars", [](const VectorField& f) { return f.vars().names(); })
      .def_property_readonly("components", [](const VectorField& f) {
        std::vector<std::string> out;
        for (const auto& c : f.components()) out.push_back(c.str());
        return out;
      })
      .def_property_readonly("params", [](const VectorField& f) {
        std::map<std::string, std::string> out;
        for (const auto& [k, v] : f.params()) out[k] = v.str();
        return out;
      })
      .def_property_readonly("degree", &VectorField::degree)
      .def("lie_derivative", [](const VectorField& f, const std::string& p) { return lie_derivative(f, poly_of(f, p)).str(); })
      .def("restrict", [](const VectorField& f, const std::string& var) { return restrict_to_plane(f, var); })
      .def("__str__", &print_field)
      .def("__repr__", [](const VectorField& f) { return "<Field " + print_field(f) + ">"; });

  m.def("darboux", [](const VectorField& f, unsigned degree, std::optional<unsigned> bound) {
    const DarbouxOptions o{degree, bound};
    return report("darboux", config(o), f, run_darboux(f, o));
  }, py::arg("field"), py::arg("degree") = 2, py::arg("lattice_bound") = py::none());

  m.def("expfactors", [](const VectorField& f, unsigned g_degree, unsigned s_bound) {
    const ExpFactorOptions o{g_degree, s_bound};
    return report("expfactors", config(o), f, run_expfactors(f, o));
  }, py::arg("field"), py::arg("g_degree") = 2, py::arg("s_bound") = 1);

  m.def("integrals", [](const VectorField& f, unsigned degree, unsigned g_degree, unsigned s_bound) {
    const IntegralOptions o{{degree, std::nullopt}, {g_degree, s_bound}};
    return report("integrals", config(o), f, run_integrals(f, o));
  }, py::arg("field"), py::arg("degree") = 2, py::arg("g_degree") = 2, py::arg("s_bound") = 1);

  m.def("formal", [](const VectorField& f, unsigned order, unsigned margin, std::optional<std::string> promote) {
    const FormalOptions o{order, margin, promote};
    return report("formal", config(o), f, run_formal(f, o));
  }, py::arg("field"), py::arg("order") = 6, py::arg("margin") = 2, py::arg("promote") = py::none());

  m.def("simulate", [](const VectorField& f, std::vector<double> x0, double t_end, const std::string& method,
                       double tol, double dt, std::vector<std::string> integrals, bool darboux_integrals,
                       std::optional<std::string> emit) {
    SimulateOptions o;
    o.x0 = std::move(x0);
    o.t_end = t_end;
    o.integrator = integrator(method, tol, dt);
    o.integrals = std::move(integrals);
    o.darboux_integrals = darboux_integrals;
    o.emit = std::move(emit);
    py::gil_scoped_release release;
    return report("simulate", config(o), f, run_simulate(f, o));
  }, py::arg("field"), py::arg("x0") = std::vector<double>{}, py::arg("t_end") = 100.0, py::arg("method") = "dopri45",
     py::arg("tol") = 1e-10, py::arg("dt") = 1e-3, py::arg("integrals") = std::vector<std::string>{},
     py::arg("darboux_integrals") = false, py::arg("emit") = py::none());

  m.def("trajectory", [](const VectorField& f, std::vector<double> x0, double t_end, const std::string& method,
                         double tol, double dt) {
    const auto traj = simulate(f, x0, t_end, integrator(method, tol, dt));
    return py::make_tuple(traj.times, traj.states);
  }, py::arg("field"), py::arg("x0"), py::arg("t_end"), py::arg("method") = "dopri45", py::arg("tol") = 1e-10,
     py::arg("dt") = 1e-3);

  m.def("lyapunov", [](const VectorField& f, std::vector<double> x0, double t_end, double renorm_dt,
                       const std::string& method, double tol, double dt) {
    LyapunovOptions o{std::move(x0), t_end, renorm_dt, integrator(method, tol, dt)};
    py::gil_scoped_release release;
    return report("lyapunov", config(o), f, run_lyapunov(f, o));
  }, py::arg("field"), py::arg("x0") = std::vector<double>{}, py::arg("t_end") = 2000.0, py::arg("renorm_dt") = 0.5,
     py::arg("method") = "dopri45", py::arg("tol") = 1e-10, py::arg("dt") = 1e-3);

  m.def("verify_darboux", [](const VectorField& f, const std::string& p) -> py::object {
    const auto r = verify_darboux(f, poly_of(f, p));
    if (const auto* c = std::get_if<DarbouxCert>(&r)) return py::str(c->cofactor.str());
    return py::none();
  }, py::arg("field"), py::arg("poly"), "Cofactor of a Darboux polynomial, or None.");

  m.def("verify_exp_factor", [](const VectorField& f, const std::string& g, std::vector<unsigned> s) -> py::object {
    if (s.empty()) s.assign(coordinate_certificates(f).size(), 0);
    const auto r = verify_exp_factor(f, poly_of(f, g), s);
    if (const auto* c = std::get_if<ExpFactorCert>(&r)) return py::str(c->cofactor.str());
    return py::none();
  }, py::arg("field"), py::arg("g"), py::arg("s") = std::vector<unsigned>{},
     "Cofactor L of exp(g / prod x_i^s_i), or None.");

  m.def("render_text", [](const std::string& report_json) { return render_text(Json::parse(report_json)); });
}
