#pragma once

#include <optional>
#include <string>
#include <vector>

#include "darboux_lab/report.hpp"

namespace dlab {

// A result failed its independent re-check before emission.
class InvalidCertificate : public Error {
 public:
  using Error::Error;
};

struct DarbouxOptions {
  unsigned degree = 2;
  std::optional<unsigned> lattice_bound;  // defaults to the degree
};

struct ExpFactorOptions {
  unsigned g_degree = 2;
  unsigned s_bound = 1;
};

struct IntegralOptions {
  DarbouxOptions darboux;
  ExpFactorOptions exp_factors;
};

struct FormalOptions {
  unsigned order = 6;
  unsigned margin = 2;
  std::optional<std::string> promote;
};

struct SimulateOptions {
  std::vector<double> x0;
  double t_end = 100;
  IntegratorOptions integrator;
  std::vector<std::string> integrals;  // polynomial expressions to track
  bool darboux_integrals = false;      // also track the assembled Darboux integrals
  IntegralOptions integral_search;
  std::optional<std::string> emit;  // CSV path
};

struct LyapunovOptions {
  std::vector<double> x0;
  double t_end = 2000;
  double renorm_dt = 0.5;
  IntegratorOptions integrator;
};

struct AnalyzeOptions {
  IntegralOptions integrals;
  FormalOptions formal;
  std::optional<SimulateOptions> simulate;
  std::optional<LyapunovOptions> lyapunov;
};

// Each returns the "result" record of the report; config() gives the
// matching configuration echo.
Json run_darboux(const VectorField& field, const DarbouxOptions& opt);
Json run_expfactors(const VectorField& field, const ExpFactorOptions& opt);
Json run_integrals(const VectorField& field, const IntegralOptions& opt);
Json run_formal(const VectorField& field, const FormalOptions& opt);
Json run_simulate(const VectorField& field, const SimulateOptions& opt);
Json run_lyapunov(const VectorField& field, const LyapunovOptions& opt);
Json run_analyze(const VectorField& field, const AnalyzeOptions& opt);

Json config(const DarbouxOptions& opt);
Json config(const ExpFactorOptions& opt);
Json config(const IntegralOptions& opt);
Json config(const FormalOptions& opt);
Json config(const SimulateOptions& opt);
Json config(const LyapunovOptions& opt);
Json config(const AnalyzeOptions& opt);

// Default initial state: (0.5, 1.0, 2.0) for three variables, otherwise
// 0.5 in every coordinate.
std::vector<double> default_initial_state(const VectorField& field);

}  // namespace dlab
