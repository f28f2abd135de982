#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "darboux_lab/darboux.hpp"
#include "darboux_lab/field.hpp"

namespace dlab {

class NonFinite : public Error {
 public:
  NonFinite(double t, const std::string& what);
  double time() const { return t_; }

 private:
  double t_;
};

class EvalDomain : public Error {
 public:
  using Error::Error;
};

// Float64 evaluation of an exact polynomial, compiled once to a stack
// program that applies Horner's rule variable by variable. A factor x_i
// stays a factor, so planes x_i = 0 evaluate to exactly zero.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const Poly& p);
  double operator()(std::span<const double> x) const;

 private:
  enum class Op : unsigned char { Push, MulVar, Add };
  struct Instr {
    Op op;
    std::size_t var;
    double value;
  };
  void emit(const std::vector<Term>& terms, std::size_t var, std::size_t nvars);

  std::vector<Instr> code_;
  std::size_t max_stack_ = 0;
};

// Right-hand side and analytic Jacobian of a field.
class CompiledField {
 public:
  explicit CompiledField(const VectorField& field);
  std::size_t dimension() const { return rhs_.size(); }
  void rhs(std::span<const double> x, std::span<double> out) const;
  // Row-major n x n.
  void jacobian(std::span<const double> x, std::span<double> out) const;

 private:
  std::vector<CompiledPoly> rhs_;
  std::vector<CompiledPoly> jac_;
};

enum class Method { RK4, DormandPrince45 };

// PI controller constants for the adaptive pair.
struct StepControl {
  static constexpr double safety = 0.9;
  static constexpr double alpha = 0.17;  // 1/5 - 0.75 * beta
  static constexpr double beta = 0.04;
  static constexpr double min_factor = 0.2;
  static constexpr double max_factor = 10.0;
};

struct IntegratorOptions {
  Method method = Method::DormandPrince45;
  double atol = 1e-10;
  double rtol = 1e-10;
  double dt = 1e-3;  // fixed step for RK4, initial step for the adaptive pair
  std::size_t max_steps = 100'000'000;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  Method method = Method::DormandPrince45;
  IntegratorOptions options;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

std::string method_name(Method m);

struct StepStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
  double last_step = 0;  // step size the controller proposed last
};

// Calls on_step(t, y) once for the initial state and after every accepted
// step. Returns the state at t_end. Throws NonFinite on overflow or NaN.
using Rhs = std::function<void(std::span<const double>, std::span<double>)>;
std::vector<double> integrate(const Rhs& rhs, std::vector<double> y0, double t0, double t_end,
                              const IntegratorOptions& options,
                              const std::function<void(double, std::span<const double>)>& on_step = {},
                              StepStats* stats = nullptr);

Trajectory simulate(const VectorField& field, std::span<const double> x0, double t_end,
                    const IntegratorOptions& options = {});

// Float64 evaluation of a polynomial or a Darboux function.
class ScalarFunction {
 public:
  ScalarFunction(std::string name, const Poly& p);
  ScalarFunction(std::string name, const DarbouxFunction& fn);
  const std::string& name() const { return name_; }
  // Throws EvalDomain when a factor raised to a negative or fractional
  // power vanishes, or a fractional power meets a negative base.
  double operator()(std::span<const double> x) const;

 private:
  struct Factor {
    CompiledPoly base;
    double exponent;
    bool integral;
  };
  struct Exponential {
    CompiledPoly numerator;
    std::vector<std::pair<CompiledPoly, int>> denominator;
    double weight;
  };
  std::string name_;
  std::vector<Factor> factors_;
  std::vector<Exponential> exponentials_;
};

struct DriftReport {
  std::string id;
  double max_abs_drift = 0;
  double relative_drift = 0;  // max_abs_drift / |H(x0)|, or max_abs_drift when H(x0) = 0
};

DriftReport conservation_drift(const Trajectory& traj, const ScalarFunction& h);

// CSV with header t,<vars>[,<extra names>], one row per stored state, 17
// significant digits, LF line endings.
void write_csv(std::ostream& out, const Trajectory& traj, const VarList& vars,
               const std::vector<ScalarFunction>& extra = {});

// Largest Lyapunov exponent by Benettin's method: a tangent vector evolved
// with the analytic Jacobian, renormalized every renorm_dt.
double lyapunov_max(const VectorField& field, std::span<const double> x0, double t_end, double renorm_dt,
                    const IntegratorOptions& options = {});

}  // namespace dlab
