#include "darboux_lab/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>

namespace dlab {

NonFinite::NonFinite(double t, const std::string& what)
    : Error("non-finite state at t = " + std::to_string(t) + ": " + what), t_(t) {}

CompiledPoly::CompiledPoly(const Poly& p) {
  emit(p.terms(), 0, p.vars().size());
  // Replay the program to size the evaluation stack.
  std::size_t d = 0;
  for (const auto& in : code_) {
    if (in.op == Op::Push) max_stack_ = std::max(max_stack_, ++d);
    if (in.op == Op::Add) --d;
  }
}

void CompiledPoly::emit(const std::vector<Term>& terms, std::size_t var, std::size_t nvars) {
  if (var == nvars || terms.empty()) {
    Rational sum;
    for (const auto& t : terms) sum += t.coef;
    code_.push_back({Op::Push, 0, sum.to_double()});
    return;
  }
  std::map<std::uint32_t, std::vector<Term>> groups;
  for (const auto& t : terms) groups[t.monomial[var]].push_back(t);
  const std::uint32_t top = groups.rbegin()->first;
  emit(groups.rbegin()->second, var + 1, nvars);
  for (std::uint32_t e = top; e-- > 0;) {
    code_.push_back({Op::MulVar, var, 0.0});
    if (auto it = groups.find(e); it != groups.end()) {
      emit(it->second, var + 1, nvars);
      code_.push_back({Op::Add, 0, 0.0});
    }
  }
}

double CompiledPoly::operator()(std::span<const double> x) const {
  if (code_.empty()) return 0.0;
  std::array<double, 64> small;
  std::vector<double> large;
  double* stack = small.data();
  if (max_stack_ > small.size()) {
    large.resize(max_stack_);
    stack = large.data();
  }
  std::size_t sp = 0;
  for (const auto& in : code_) {
    switch (in.op) {
      case Op::Push:
        stack[sp++] = in.value;
        break;
      case Op::MulVar:
        stack[sp - 1] *= x[in.var];
        break;
      case Op::Add:
        --sp;
        stack[sp - 1] += stack[sp];
        break;
    }
  }
  return stack[0];
}

CompiledField::CompiledField(const VectorField& field) {
  const std::size_t n = field.dimension();
  for (const auto& c : field.components()) rhs_.emplace_back(c);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) jac_.emplace_back(field.component(i).derivative(j));
}

void CompiledField::rhs(std::span<const double> x, std::span<double> out) const {
  for (std::size_t i = 0; i < rhs_.size(); ++i) out[i] = rhs_[i](x);
}

void CompiledField::jacobian(std::span<const double> x, std::span<double> out) const {
  for (std::size_t k = 0; k < jac_.size(); ++k) out[k] = jac_[k](x);
}

std::string method_name(Method m) { return m == Method::RK4 ? "rk4" : "dopri45"; }

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::vector<double> integrate_rk4(const Rhs& rhs, std::vector<double> y, double t0, double t_end,
                                  const IntegratorOptions& opt,
                                  const std::function<void(double, std::span<const double>)>& on_step,
                                  StepStats& stats) {
  const std::size_t n = y.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  const double span = t_end - t0;
  const auto steps = static_cast<std::size_t>(std::ceil(span / opt.dt * (1 - 1e-12)));
  if (steps > opt.max_steps) throw Error("fixed step too small: more than max_steps steps");
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = t0 + static_cast<double>(k) * opt.dt;
    const double t_next = k + 1 == steps ? t_end : t0 + static_cast<double>(k + 1) * opt.dt;
    const double h = t_next - t;
    rhs(y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    rhs(tmp, k4);
    for (std::size_t i = 0; i < n; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    stats.rhs_evals += 4;
    ++stats.accepted;
    if (!all_finite(y)) throw NonFinite(t_next, "state overflowed or became NaN");
    if (on_step) on_step(t_next, y);
  }
  stats.last_step = opt.dt;
  return y;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

std::vector<double> integrate_dopri(const Rhs& rhs, std::vector<double> y, double t0, double t_end,
                                    const IntegratorOptions& opt,
                                    const std::function<void(double, std::span<const double>)>& on_step,
                                    StepStats& stats) {
  using C = StepControl;
  const std::size_t n = y.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);
  double t = t0;
  double h = opt.dt;
  double err_old = 1e-4;
  rhs(y, k1);
  ++stats.rhs_evals;
  std::size_t steps = 0;
  while (t < t_end) {
    if (++steps > opt.max_steps) throw Error("adaptive integration exceeded max_steps");
    const bool last = t + h >= t_end;
    if (last) h = t_end - t;
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    rhs(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    rhs(ynew, k7);
    stats.rhs_evals += 6;

    double err = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / static_cast<double>(n));

    if (!std::isfinite(err)) {
      ++stats.rejected;
      h *= C::min_factor;
      if (h <= 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
        throw NonFinite(t, "right-hand side overflowed; step size underflow");
      continue;
    }
    const double fac11 = std::pow(err, C::alpha);
    if (err <= 1.0) {
      double fac = fac11 / std::pow(err_old, C::beta);
      fac = std::clamp(fac / C::safety, 1.0 / C::max_factor, 1.0 / C::min_factor);
      err_old = std::max(err, 1e-4);
      t = last ? t_end : t + h;
      y.swap(ynew);
      k1.swap(k7);
      ++stats.accepted;
      if (!all_finite(y)) throw NonFinite(t, "state overflowed or became NaN");
      if (on_step) on_step(t, y);
      if (!last) h = h / fac;
    } else {
      ++stats.rejected;
      h = h / std::min(1.0 / C::min_factor, fac11 / C::safety);
      if (h <= 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
        throw NonFinite(t, "step size underflow");
    }
  }
  stats.last_step = h;
  return y;
}

}  // namespace

std::vector<double> integrate(const Rhs& rhs, std::vector<double> y0, double t0, double t_end,
                              const IntegratorOptions& options,
                              const std::function<void(double, std::span<const double>)>& on_step,
                              StepStats* stats) {
  if (!(t_end > t0)) throw Error("t_end must be greater than the start time");
  if (!(options.dt > 0)) throw Error("step size must be positive");
  if (options.method == Method::DormandPrince45 && !(options.atol > 0 && options.rtol > 0))
    throw Error("tolerances must be positive");
  if (!all_finite(y0)) throw NonFinite(t0, "initial state is not finite");
  StepStats local;
  StepStats& s = stats ? *stats : local;
  if (on_step) on_step(t0, y0);
  if (options.method == Method::RK4) return integrate_rk4(rhs, std::move(y0), t0, t_end, options, on_step, s);
  return integrate_dopri(rhs, std::move(y0), t0, t_end, options, on_step, s);
}

Trajectory simulate(const VectorField& field, std::span<const double> x0, double t_end,
                    const IntegratorOptions& options) {
  if (x0.size() != field.dimension())
    throw Error("initial state has " + std::to_string(x0.size()) + " entries, field has " +
                std::to_string(field.dimension()) + " variables");
  const CompiledField compiled(field);
  Trajectory traj;
  traj.method = options.method;
  traj.options = options;
  StepStats stats;
  integrate([&](std::span<const double> x, std::span<double> out) { compiled.rhs(x, out); },
            std::vector<double>(x0.begin(), x0.end()), 0.0, t_end, options,
            [&](double t, std::span<const double> y) {
              traj.times.push_back(t);
              traj.states.emplace_back(y.begin(), y.end());
            },
            &stats);
  traj.accepted = stats.accepted;
  traj.rejected = stats.rejected;
  traj.rhs_evals = stats.rhs_evals;
  return traj;
}

ScalarFunction::ScalarFunction(std::string name, const Poly& p) : name_(std::move(name)) {
  factors_.push_back({CompiledPoly(p), 1.0, true});
}

ScalarFunction::ScalarFunction(std::string name, const DarbouxFunction& fn) : name_(std::move(name)) {
  for (const auto& [cert, lambda] : fn.darboux_terms)
    factors_.push_back({CompiledPoly(cert.f), lambda.to_double(), lambda.is_integer()});
  for (const auto& [cert, mu] : fn.exp_terms) {
    Exponential e{CompiledPoly(cert.g), {}, mu.to_double()};
    for (std::size_t i = 0; i < cert.s.size(); ++i)
      if (cert.s[i] > 0) e.denominator.emplace_back(CompiledPoly(cert.denominators[i]), static_cast<int>(cert.s[i]));
    exponentials_.push_back(std::move(e));
  }
}

double ScalarFunction::operator()(std::span<const double> x) const {
  double value = 1.0;
  for (const auto& f : factors_) {
    const double b = f.base(x);
    if (b == 0.0 && f.exponent < 0) throw EvalDomain(name_ + ": factor with negative exponent vanishes");
    if (b < 0.0 && !f.integral) throw EvalDomain(name_ + ": fractional power of a negative factor");
    value *= f.exponent == 1.0 ? b : std::pow(b, f.exponent);
  }
  double arg = 0.0;
  for (const auto& e : exponentials_) {
    double den = 1.0;
    for (const auto& [p, s] : e.denominator) den *= std::pow(p(x), s);
    if (den == 0.0) throw EvalDomain(name_ + ": exponential factor denominator vanishes");
    arg += e.weight * e.numerator(x) / den;
  }
  return exponentials_.empty() ? value : value * std::exp(arg);
}

DriftReport conservation_drift(const Trajectory& traj, const ScalarFunction& h) {
  DriftReport r;
  r.id = h.name();
  if (traj.states.empty()) return r;
  const double h0 = h(traj.states.front());
  for (const auto& s : traj.states) r.max_abs_drift = std::max(r.max_abs_drift, std::abs(h(s) - h0));
  r.relative_drift = h0 == 0.0 ? r.max_abs_drift : r.max_abs_drift / std::abs(h0);
  return r;
}

void write_csv(std::ostream& out, const Trajectory& traj, const VarList& vars,
               const std::vector<ScalarFunction>& extra) {
  out << "t";
  for (const auto& v : vars.names()) out << ',' << v;
  for (const auto& f : extra) out << ',' << f.name();
  out << '\n';
  char buf[40];
  const auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    put(traj.times[k]);
    for (double v : traj.states[k]) {
      out << ',';
      put(v);
    }
    for (const auto& f : extra) {
      out << ',';
      put(f(traj.states[k]));
    }
    out << '\n';
  }
}

double lyapunov_max(const VectorField& field, std::span<const double> x0, double t_end, double renorm_dt,
                    const IntegratorOptions& options) {
  if (!(renorm_dt > 0) || !(t_end > renorm_dt)) throw Error("need t_end > renorm_dt > 0");
  const std::size_t n = field.dimension();
  if (x0.size() != n) throw Error("initial state does not match the field dimension");
  const CompiledField compiled(field);
  std::vector<double> jac(n * n);
  const Rhs rhs = [&](std::span<const double> y, std::span<double> out) {
    compiled.rhs(y.first(n), out.first(n));
    compiled.jacobian(y.first(n), jac);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0;
      for (std::size_t j = 0; j < n; ++j) s += jac[i * n + j] * y[n + j];
      out[n + i] = s;
    }
  };
  std::vector<double> y(2 * n);
  std::copy(x0.begin(), x0.end(), y.begin());
  for (std::size_t i = 0; i < n; ++i) y[n + i] = 1.0 / std::sqrt(static_cast<double>(n));

  IntegratorOptions opt = options;
  double t = 0.0;
  double sum = 0.0;
  while (t < t_end) {
    const double next = std::min(t + renorm_dt, t_end);
    StepStats stats;
    y = integrate(rhs, std::move(y), t, next, opt, {}, &stats);
    if (opt.method == Method::DormandPrince45 && stats.last_step > 0) opt.dt = stats.last_step;
    double norm = 0;
    for (std::size_t i = 0; i < n; ++i) norm += y[n + i] * y[n + i];
    norm = std::sqrt(norm);
    if (!(norm > 0) || !std::isfinite(norm)) throw NonFinite(next, "tangent vector degenerated");
    sum += std::log(norm);
    for (std::size_t i = 0; i < n; ++i) y[n + i] /= norm;
    t = next;
  }
  return sum / t_end;
}

}  // namespace dlab
