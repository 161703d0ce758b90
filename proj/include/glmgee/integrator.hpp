#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "glmgee/problems.hpp"
#include "glmgee/tableau.hpp"

namespace glmgee {

/// Carried quantities between steps: slot 0 is the solution, slot 1 the error
/// estimate (GLyeps) or the companion solution (GLyytilde).
struct GeeState {
  double t = 0.0;
  std::vector<VecD> slots;
  TableauForm form = TableauForm::Yeps;

  const VecD& y() const { return slots[0]; }
};

/// Thrown when a stage or output stops being finite; carries the offending
/// stage index (-1 for an output row).
struct DivergenceError : std::runtime_error {
  DivergenceError(const std::string& what, double when, int stage_index)
      : std::runtime_error(what), t(when), stage(stage_index) {}
  double t;
  int stage;
};

struct StepRecord {
  int n = 0;
  double t = 0.0;
  double dt = 0.0;
  VecD y;
  VecD eps_global;
  VecD eps_local;
  VecD y_hat;
  std::optional<VecD> true_err;
};

struct IntegrationTrace {
  std::vector<StepRecord> steps;
  bool diverged = false;
  std::string divergence_note;

  const StepRecord& back() const { return steps.back(); }
};

struct StepController {
  enum class Mode { Fixed, LocalError };
  Mode mode = Mode::Fixed;
  double dt0 = 1e-2;
  double dt_min = 1e-12;
  double dt_max = 1e0;
  double tol_local = 1e-6;
  double safety = 0.9;
  double growth_min = 0.2;  // clip on dt ratio per step
  double growth_max = 5.0;

  static StepController fixed(double dt) {
    StepController c;
    c.mode = Mode::Fixed;
    c.dt0 = dt;
    return c;
  }
  static StepController local_error(double dt0, double tol, double dt_min, double dt_max) {
    StepController c;
    c.mode = Mode::LocalError;
    c.dt0 = dt0;
    c.tol_local = tol;
    c.dt_min = dt_min;
    c.dt_max = dt_max;
    return c;
  }
};

/// One GL step: stages in index order, f evaluated at t + c_i*dt, outputs
/// through (B, V). Requires an explicit tableau.
GeeState step(const TableauD& t, const OdeProblem& problem, const GeeState& state, double dt);

GeeState initial_state(const TableauD& t, const OdeProblem& problem, double t0, const VecD& y0);

/// Extracts the global-error estimate from a state (slot 1 directly in GLyeps
/// form, (ytilde - y)/(1 - gamma) in GLyytilde form, zero for plain RK).
VecD eps_global_of(const TableauD& t, const GeeState& state);

/// Advances from t0 to T landing exactly on T. Fixed mode uses uniform steps
/// with a shrunk final step; local-error mode rescales dt from the local
/// estimate (never rejecting) within [dt_min, dt_max]. true_err is filled when
/// the problem has an exact solution.
IntegrationTrace integrate(const TableauD& t, const OdeProblem& problem, double t0,
                           const VecD& y0, double T, const StepController& ctrl);

/// Fixed, caller-chosen step sequence; used for nonuniform-grid studies and
/// step-for-step comparisons against reference implementations.
IntegrationTrace integrate_with_steps(const TableauD& t, const OdeProblem& problem, double t0,
                                      const VecD& y0, std::span<const double> dts);

struct ConvergenceRow {
  double dt;
  double err_y;
  double err_estimate_gap;
  double err_yhat;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  double slope_y = 0.0;
  double slope_gap = 0.0;
  double slope_yhat = 0.0;
};

/// Final-time errors against the exact solution (or a reference oracle) over a
/// descending dt list, with least-squares log-log slopes.
ConvergenceTable convergence_study(const TableauD& t, const OdeProblem& problem, double t0,
                                   const VecD& y0, double T, std::span<const double> dts);

struct ToleranceRerun {
  double dt_star = 0.0;
  double pilot_eps = 0.0;
  IntegrationTrace trace;
};

/// Pilot run at dt0, then dt* = dt0*(tol/|eps(T)|)^(1/p) and a second fixed
/// run at dt*. The achieved error is reported, not guaranteed.
ToleranceRerun prescribed_tolerance_rerun(const TableauD& t, const OdeProblem& problem, double t0,
                                          const VecD& y0, double T, double dt0,
                                          double tol_global);

double max_norm(const VecD& v);

/// Least-squares slope of log(err) against log(dt).
double loglog_slope(std::span<const double> dts, std::span<const double> errs);

}  // namespace glmgee
