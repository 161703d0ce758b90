#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "glmgee/rational.hpp"

namespace glmgee {

/// Right-hand side, optional exact solution and Jacobian, initial data and the
/// default integration window of a test problem.
struct OdeProblem {
  std::string name;
  int dim = 0;
  std::function<VecD(double, const VecD&)> f;
  std::function<VecD(double)> exact;                 // may be empty
  std::function<MatD(double, const VecD&)> jacobian; // may be empty
  VecD y0;
  double t0 = 0.0;
  double tend = 1.0;
  std::map<std::string, double> params;

  bool has_exact() const { return static_cast<bool>(exact); }
  bool has_jacobian() const { return static_cast<bool>(jacobian); }
};

namespace problems {

/// y' = y - sin t + cos t with solution kappa*e^t + sin t; unstable to
/// perturbations for every kappa.
OdeProblem prince42(double kappa = 0.0);

/// Four-component nonautonomous system with solution built from sin(t^2);
/// develops unstable modes late in the window.
OdeProblem kulikov2013i();

/// Nonlinear long-run problem (Hull et al. B4); no closed-form solution.
OdeProblem hull1972b4();

/// y' = A y with eigenvalues a +- i b; places the test spectrum anywhere in
/// the complex plane.
OdeProblem lstab2(double a, double b, const VecD& y0);

/// y1' = 1, y2' = kappa2*y1^3, y3' = kappa3*y1^4: the polynomial system on
/// which RK3(2)G1's error estimate goes blind.
OdeProblem tree_test(double kappa2 = 1.0 / 6.0, double kappa3 = 4.0);

std::vector<std::string> names();

/// Look up by name with optional parameter overrides (kappa, a, b, ...).
OdeProblem get(const std::string& name, const std::map<std::string, double>& params = {});

/// High-accuracy reference trajectory for problems without a closed form.
/// Integrates the highest-order catalog method's companion output on a grid
/// that divides `grid_dt` exactly, refining until two successive halvings
/// agree at the final time; values are memoized per (problem, window, grid).
class ReferenceOracle {
 public:
  ReferenceOracle(const OdeProblem& problem, double t_end, double grid_dt,
                  double agree_tol = 1e-11);

  /// Value at t, which must lie on the grid (within 1e-9 relative).
  VecD at(double t) const;

  double achieved_agreement() const { return achieved_; }
  double dt_used() const { return dt_; }

 private:
  std::vector<double> times_;
  std::vector<VecD> values_;
  double achieved_ = 0.0;
  double dt_ = 0.0;
};

/// One-off reference lookup; oracles are cached per problem/window.
VecD reference_solution(const OdeProblem& problem, double t);

}  // namespace problems
}  // namespace glmgee
