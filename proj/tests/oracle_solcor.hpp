#pragma once

// Test-only oracle: direct implementation of solving for the correction.
// Advances y with the RK method, builds the dense-output interpolant P and
// its derivative, then advances eps' = f(t, P + eps) - P'(t) with the same
// method. Written against the defining equations, independently of the GL
// composite it validates.

#include <vector>

#include "glmgee/problems.hpp"
#include "glmgee/rk.hpp"

namespace glmgee::testing {

struct SolCorState {
  double t;
  VecD y;
  VecD eps;
};

inline SolCorState solcor_step(const RkWithDenseOutput<Rational>& method,
                               const OdeProblem& problem, const SolCorState& state, double h) {
  const RkTableauD rk = to_double(method.rk);
  const int s = rk.stages();
  const int deg = method.interp_degree();
  MatD Bs = to_double(method.Bstar);
  MatD Ds = to_double(method.Dstar);

  // solution stages and propagation
  std::vector<VecD> f(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) {
    VecD yi = state.y;
    for (int j = 0; j < i; ++j) yi += (h * rk.A(i, j)) * f[static_cast<std::size_t>(j)];
    f[static_cast<std::size_t>(i)] = problem.f(state.t + rk.c(i) * h, yi);
  }
  VecD y_next = state.y;
  for (int i = 0; i < s; ++i) y_next += (h * rk.b(i)) * f[static_cast<std::size_t>(i)];

  // dense output P(t + theta h) = y + h sum_i bstar_i(theta) f_i and its time
  // derivative P' = sum_i (d bstar_i/dtheta)(theta) f_i
  auto P = [&](double theta) {
    VecD p = state.y;
    for (int i = 0; i < s; ++i) {
      double w = 0, pw = theta;
      for (int j = 0; j < deg; ++j) {
        w += Bs(i, j) * pw;
        pw *= theta;
      }
      p += (h * w) * f[static_cast<std::size_t>(i)];
    }
    return p;
  };
  auto Pprime = [&](double theta) {
    VecD p = VecD::Zero(state.y.size());
    for (int i = 0; i < s; ++i) {
      double w = 0, pw = 1.0;
      for (int j = 0; j < deg; ++j) {
        w += Ds(i, j) * pw;
        pw *= theta;
      }
      p += w * f[static_cast<std::size_t>(i)];
    }
    return p;
  };

  // same scheme on the correction equation
  std::vector<VecD> g(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) {
    VecD ei = state.eps;
    for (int j = 0; j < i; ++j) ei += (h * rk.A(i, j)) * g[static_cast<std::size_t>(j)];
    double theta = rk.c(i);
    g[static_cast<std::size_t>(i)] =
        problem.f(state.t + theta * h, VecD(P(theta) + ei)) - Pprime(theta);
  }
  VecD e_next = state.eps;
  for (int i = 0; i < s; ++i) e_next += (h * rk.b(i)) * g[static_cast<std::size_t>(i)];

  return {state.t + h, std::move(y_next), std::move(e_next)};
}

}  // namespace glmgee::testing
