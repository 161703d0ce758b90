#pragma once

#include "glmgee/integrator.hpp"
#include "glmgee/rk.hpp"
#include "glmgee/tableau.hpp"

namespace glmgee {

/// Casts the solving-for-correction procedure for an RK method with dense
/// output into a 2s-stage GLyeps tableau: the first stage block advances the
/// solution, the second integrates the interpolant-defect equation for the
/// error, with gamma = 0.
TableauQ build_solving_for_correction(const RkWithDenseOutput<Rational>& rk);

/// Casts Richardson extrapolation over one full and two half steps of an
/// order-p RK method into a 3s-stage GLyeps tableau with gamma = 1/2^p.
TableauQ build_extrapolation(const RkTableauQ& rk, int order);

/// Runs the (S, M, F) exact-principal-error estimator: y_1 = S(y_0), then
/// y_n = M(y_{n-1}) with eps_n = y_n - F(y_{n-1}).
IntegrationTrace run_exact_principal_error(const RkTriplet<Rational>& triplet,
                                           const OdeProblem& problem, double t0, const VecD& y0,
                                           double T, double dt);

/// Advances y with the embedded pair and the error with the same scheme
/// applied to eps' = J eps + d, the forcing frozen per step from the embedded
/// difference. Requires problem.jacobian.
IntegrationTrace solve_error_equation(const RkEmbeddedPair<Rational>& pair,
                                      const OdeProblem& problem, double t0, const VecD& y0,
                                      double T, double dt);

}  // namespace glmgee
