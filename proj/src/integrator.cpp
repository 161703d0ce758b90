#include "glmgee/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace glmgee {
namespace {

bool all_finite(const VecD& v) { return v.allFinite(); }

VecD abscissae_of(const TableauD& t) {
  // q1 = 0 for every supported form, so c = A*1.
  return t.A * VecD::Ones(t.s);
}

}  // namespace

double max_norm(const VecD& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

GeeState initial_state(const TableauD& t, const OdeProblem& problem, double t0, const VecD& y0) {
  t.check_dims();
  if (y0.size() != problem.dim)
    throw std::invalid_argument("initial state dimension does not match problem");
  GeeState s;
  s.t = t0;
  s.form = t.form;
  s.slots.assign(static_cast<std::size_t>(t.r), VecD::Zero(problem.dim));
  s.slots[0] = y0;
  if (t.r > 1 && t.form == TableauForm::Yytilde) s.slots[1] = y0;  // eps = 0 <=> ytilde = y
  return s;
}

GeeState step(const TableauD& t, const OdeProblem& problem, const GeeState& state, double dt) {
  if (!t.is_explicit())
    throw std::invalid_argument("step: only explicit tableaux (strictly lower A) are supported");
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  if (static_cast<int>(state.slots.size()) != t.r ||
      state.slots[0].size() != problem.dim)
    throw std::invalid_argument("step: state does not match tableau/problem");

  const int m = problem.dim;
  const VecD c = abscissae_of(t);
  std::vector<VecD> f(static_cast<std::size_t>(t.s));
  VecD stage(m);
  for (int i = 0; i < t.s; ++i) {
    stage.setZero();
    for (int j = 0; j < t.r; ++j)
      if (t.U(i, j) != 0.0) stage.noalias() += t.U(i, j) * state.slots[static_cast<std::size_t>(j)];
    for (int j = 0; j < i; ++j)
      if (t.A(i, j) != 0.0) stage.noalias() += (dt * t.A(i, j)) * f[static_cast<std::size_t>(j)];
    if (!all_finite(stage)) {
      std::ostringstream os;
      os << "divergent stage " << i + 1 << " of " << t.name << " at t = " << state.t;
      throw DivergenceError(os.str(), state.t, i);
    }
    f[static_cast<std::size_t>(i)] = problem.f(state.t + c(i) * dt, stage);
  }

  GeeState out;
  out.t = state.t + dt;
  out.form = state.form;
  out.slots.assign(static_cast<std::size_t>(t.r), VecD::Zero(m));
  for (int i = 0; i < t.r; ++i) {
    VecD& o = out.slots[static_cast<std::size_t>(i)];
    for (int j = 0; j < t.r; ++j)
      if (t.V(i, j) != 0.0) o.noalias() += t.V(i, j) * state.slots[static_cast<std::size_t>(j)];
    for (int j = 0; j < t.s; ++j)
      if (t.B(i, j) != 0.0) o.noalias() += (dt * t.B(i, j)) * f[static_cast<std::size_t>(j)];
    if (!all_finite(o)) {
      std::ostringstream os;
      os << "divergent output " << i + 1 << " of " << t.name << " at t = " << state.t;
      throw DivergenceError(os.str(), state.t, -1);
    }
  }
  return out;
}

VecD eps_global_of(const TableauD& t, const GeeState& state) {
  if (t.r == 1) return VecD::Zero(state.slots[0].size());
  if (state.form == TableauForm::Yeps) return state.slots[1];
  return (state.slots[1] - state.slots[0]) / (1.0 - t.gamma);
}

namespace {

IntegrationTrace run_loop(const TableauD& t, const OdeProblem& problem, double t0, const VecD& y0,
                          double T, const StepController& ctrl,
                          std::span<const double> explicit_steps) {
  if (explicit_steps.empty() && !(T > t0))
    throw std::invalid_argument("integrate: T must exceed t0");
  IntegrationTrace trace;
  GeeState state = initial_state(t, problem, t0, y0);
  VecD eps_prev = VecD::Zero(problem.dim);
  const double span = T - t0;
  double dt = ctrl.mode == StepController::Mode::Fixed
                  ? ctrl.dt0
                  : std::clamp(ctrl.dt0, ctrl.dt_min, ctrl.dt_max);
  long n = 0;
  const double t_eps = 1e-12 * std::max(1.0, std::abs(T));

  while (true) {
    double remaining = explicit_steps.empty() ? T - state.t : 0.0;
    double h;
    if (!explicit_steps.empty()) {
      if (static_cast<std::size_t>(n) >= explicit_steps.size()) break;
      h = explicit_steps[static_cast<std::size_t>(n)];
    } else {
      if (remaining <= t_eps) break;
      h = std::min(dt, remaining);  // shrink the final step to land on T
    }

    GeeState next;
    try {
      next = step(t, problem, state, h);
    } catch (const DivergenceError& e) {
      trace.diverged = true;
      trace.divergence_note = e.what();
      return trace;
    }
    ++n;
    if (explicit_steps.empty()) {
      // multiplicative time keeps uniform grids bit-aligned across refinements
      next.t = (ctrl.mode == StepController::Mode::Fixed && h == dt) ? t0 + n * dt : state.t + h;
      if (T - next.t <= t_eps) next.t = T;
    }

    StepRecord rec;
    rec.n = static_cast<int>(n);
    rec.t = next.t;
    rec.dt = h;
    rec.y = next.slots[0];
    rec.eps_global = eps_global_of(t, next);
    rec.eps_local = rec.eps_global - eps_prev;
    rec.y_hat = rec.y + rec.eps_global;
    if (problem.has_exact()) rec.true_err = VecD(problem.exact(next.t) - rec.y);
    eps_prev = rec.eps_global;
    trace.steps.push_back(std::move(rec));
    state = std::move(next);

    if (ctrl.mode == StepController::Mode::LocalError && explicit_steps.empty()) {
      double err = max_norm(trace.steps.back().eps_local);
      double factor = ctrl.growth_max;
      if (err > 0.0)
        factor = std::clamp(ctrl.safety * std::pow(ctrl.tol_local / err, 1.0 / (t.order + 1)),
                            ctrl.growth_min, ctrl.growth_max);
      dt = std::clamp(dt * factor, ctrl.dt_min, ctrl.dt_max);
    }
  }
  return trace;
}

}  // namespace

IntegrationTrace integrate(const TableauD& t, const OdeProblem& problem, double t0,
                           const VecD& y0, double T, const StepController& ctrl) {
  return run_loop(t, problem, t0, y0, T, ctrl, {});
}

IntegrationTrace integrate_with_steps(const TableauD& t, const OdeProblem& problem, double t0,
                                      const VecD& y0, std::span<const double> dts) {
  return run_loop(t, problem, t0, y0, t0, StepController::fixed(1.0), dts);
}

ConvergenceTable convergence_study(const TableauD& t, const OdeProblem& problem, double t0,
                                   const VecD& y0, double T, std::span<const double> dts) {
  auto truth = [&](double at) {
    if (problem.has_exact()) return problem.exact(at);
    return problems::reference_solution(problem, at);
  };
  ConvergenceTable table;
  VecD yT = truth(T);
  std::vector<double> e1, e2, e3;
  for (double dt : dts) {
    IntegrationTrace tr = integrate(t, problem, t0, y0, T, StepController::fixed(dt));
    if (tr.diverged) throw std::runtime_error("convergence_study: divergence at dt");
    const StepRecord& last = tr.back();
    VecD true_err = yT - last.y;
    ConvergenceRow row;
    row.dt = dt;
    row.err_y = max_norm(true_err);
    row.err_estimate_gap = max_norm(VecD(true_err - last.eps_global));
    row.err_yhat = max_norm(VecD(yT - last.y_hat));
    table.rows.push_back(row);
    e1.push_back(row.err_y);
    e2.push_back(row.err_estimate_gap);
    e3.push_back(row.err_yhat);
  }
  std::vector<double> ds(dts.begin(), dts.end());
  table.slope_y = loglog_slope(ds, e1);
  table.slope_gap = loglog_slope(ds, e2);
  table.slope_yhat = loglog_slope(ds, e3);
  return table;
}

ToleranceRerun prescribed_tolerance_rerun(const TableauD& t, const OdeProblem& problem, double t0,
                                          const VecD& y0, double T, double dt0,
                                          double tol_global) {
  IntegrationTrace pilot = integrate(t, problem, t0, y0, T, StepController::fixed(dt0));
  if (pilot.diverged) throw std::runtime_error("prescribed_tolerance_rerun: pilot diverged");
  ToleranceRerun out;
  out.pilot_eps = max_norm(pilot.back().eps_global);
  out.dt_star = dt0 * std::pow(tol_global / out.pilot_eps, 1.0 / t.order);
  out.trace = integrate(t, problem, t0, y0, T, StepController::fixed(out.dt_star));
  return out;
}

double loglog_slope(std::span<const double> dts, std::span<const double> errs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(dts.size());
  for (int i = 0; i < n; ++i) {
    double x = std::log(dts[i]);
    double y = std::log(std::max(errs[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace glmgee
