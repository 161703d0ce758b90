#include "glmgee/constructors.hpp"

#include <cmath>
#include <stdexcept>

namespace glmgee {
namespace {

// Interpolant weights at the stage abscissae: PB(i,k) = b*_k(c_i) and
// PD(i,k) = d b*_k/dtheta (c_i), from Bstar/Dstar in powers of theta.
void interp_at_abscissae(const RkWithDenseOutput<Rational>& rk, MatQ* PB, MatQ* PD) {
  const int s = rk.rk.stages();
  const int deg = rk.interp_degree();
  *PB = MatQ::Zero(s, s);
  *PD = MatQ::Zero(s, s);
  for (int i = 0; i < s; ++i) {
    for (int k = 0; k < s; ++k) {
      Rational theta_pow(1);  // c_i^j, starting at j=0
      Rational pb(0), pd(0);
      for (int j = 0; j < deg; ++j) {
        pd += rk.Dstar(k, j) * theta_pow;  // Dstar(k,j) c_i^j = (j+1) Bstar(k,j) c_i^j
        theta_pow *= rk.rk.c(i);
        pb += rk.Bstar(k, j) * theta_pow;  // Bstar(k,j) c_i^(j+1)
      }
      (*PB)(i, k) = pb;
      (*PD)(i, k) = pd;
    }
  }
}

RkTableauD to_d(const RkTableau<Rational>& rk) { return to_double(rk); }

VecD rk_step(const RkTableauD& rk, const OdeProblem& problem, double t, const VecD& y,
             double dt) {
  const int s = rk.stages();
  std::vector<VecD> f(static_cast<std::size_t>(s));
  VecD stage(y.size());
  for (int i = 0; i < s; ++i) {
    stage = y;
    for (int j = 0; j < i; ++j)
      if (rk.A(i, j) != 0.0) stage.noalias() += (dt * rk.A(i, j)) * f[static_cast<std::size_t>(j)];
    f[static_cast<std::size_t>(i)] = problem.f(t + rk.c(i) * dt, stage);
  }
  VecD out = y;
  for (int i = 0; i < s; ++i)
    if (rk.b(i) != 0.0) out.noalias() += (dt * rk.b(i)) * f[static_cast<std::size_t>(i)];
  return out;
}

}  // namespace

TableauQ build_solving_for_correction(const RkWithDenseOutput<Rational>& rk) {
  rk.check_dims();
  const int s = rk.rk.stages();
  MatQ PB, PD;
  interp_at_abscissae(rk, &PB, &PD);

  TableauQ t;
  t.name = rk.rk.name + "-GL";
  t.form = TableauForm::Yeps;
  t.s = 2 * s;
  t.r = 2;
  t.gamma = 0;
  t.order = rk.rk.order;
  t.A = MatQ::Zero(2 * s, 2 * s);
  t.A.topLeftCorner(s, s) = rk.rk.A;
  t.A.bottomLeftCorner(s, s) = PB - rk.rk.A * PD;
  t.A.bottomRightCorner(s, s) = rk.rk.A;
  t.U = MatQ::Zero(2 * s, 2);
  t.U.col(0).setConstant(Rational(1));
  t.U.col(1).tail(s).setConstant(Rational(1));
  t.B = MatQ::Zero(2, 2 * s);
  t.B.row(0).head(s) = rk.rk.b.transpose();
  t.B.row(1).head(s) = -(rk.rk.b.transpose() * PD);
  t.B.row(1).tail(s) = rk.rk.b.transpose();
  t.V = MatQ::Identity(2, 2);
  return t;
}

TableauQ build_extrapolation(const RkTableauQ& rk, int order) {
  rk.check_dims();
  if (order < 1) throw std::invalid_argument("build_extrapolation: order must be >= 1");
  const int s = rk.stages();
  const Rational half(1, 2);
  BigInt two_p = BigInt(1) << order;
  Rational gamma(1, two_p);  // 1/2^p
  gamma.canonicalize();
  Rational beta = Rational(1) / (Rational(1) - gamma);

  TableauQ t;
  t.name = rk.name + "-x2-GL";
  t.form = TableauForm::Yeps;
  t.s = 3 * s;
  t.r = 2;
  t.gamma = gamma;
  t.order = order;
  t.A = MatQ::Zero(3 * s, 3 * s);
  t.A.topLeftCorner(s, s) = rk.A;
  t.A.block(s, s, s, s) = half * rk.A;
  // every stage of the second half step sees the full first-half increment
  t.A.block(2 * s, s, s, s) = MatQ::Constant(s, 1, Rational(1)) * (half * rk.b.transpose());
  t.A.block(2 * s, 2 * s, s, s) = half * rk.A;
  t.U = MatQ::Zero(3 * s, 2);
  t.U.col(0).setConstant(Rational(1));
  t.U.col(1).tail(2 * s).setConstant(Rational(1) / beta);
  t.B = MatQ::Zero(2, 3 * s);
  t.B.row(0).head(s) = rk.b.transpose();
  t.B.row(1).head(s) = -beta * rk.b.transpose();
  t.B.row(1).segment(s, s) = (beta * half) * rk.b.transpose();
  t.B.row(1).tail(s) = (beta * half) * rk.b.transpose();
  t.V = MatQ::Identity(2, 2);
  return t;
}

IntegrationTrace run_exact_principal_error(const RkTriplet<Rational>& triplet,
                                           const OdeProblem& problem, double t0, const VecD& y0,
                                           double T, double dt) {
  if (!(T > t0)) throw std::invalid_argument("run_exact_principal_error: T must exceed t0");
  const RkTableauD S = to_d(triplet.S), M = to_d(triplet.M), F = to_d(triplet.F);
  IntegrationTrace trace;
  VecD y = rk_step(S, problem, t0, y0, std::min(dt, T - t0));
  VecD eps = VecD::Zero(problem.dim);
  VecD eps_prev = eps;
  long n = 1;
  double t = std::min(t0 + dt, T);
  auto record = [&](double at, double used) {
    StepRecord rec;
    rec.n = static_cast<int>(n);
    rec.t = at;
    rec.dt = used;
    rec.y = y;
    rec.eps_global = eps;
    rec.eps_local = eps - eps_prev;
    rec.y_hat = y + eps;
    if (problem.has_exact()) rec.true_err = VecD(problem.exact(at) - y);
    trace.steps.push_back(std::move(rec));
  };
  record(t, std::min(dt, T - t0));
  const double t_eps = 1e-12 * std::max(1.0, std::abs(T));
  while (T - t > t_eps) {
    double h = std::min(dt, T - t);
    VecD y_next = rk_step(M, problem, t, y, h);
    VecD y_fin = rk_step(F, problem, t, y, h);
    eps_prev = eps;
    eps = y_next - y_fin;
    y = y_next;
    ++n;
    t = (h == dt) ? t0 + n * dt : T;
    if (T - t <= t_eps) t = T;
    record(t, h);
    if (!y.allFinite()) {
      trace.diverged = true;
      trace.divergence_note = "exact-principal-error run left the finite range";
      break;
    }
  }
  return trace;
}

IntegrationTrace solve_error_equation(const RkEmbeddedPair<Rational>& pair,
                                      const OdeProblem& problem, double t0, const VecD& y0,
                                      double T, double dt) {
  if (!problem.has_jacobian())
    throw std::invalid_argument("solve_error_equation needs problem.jacobian");
  RkTableauD low, high;
  low.name = pair.name;
  low.A = to_double(pair.A);
  low.order = pair.order;
  const int s = static_cast<int>(pair.b.size());
  low.b = VecD(s);
  low.c = VecD(s);
  high = low;
  for (int i = 0; i < s; ++i) {
    low.b(i) = to_double(pair.b(i));
    high.b(i) = to_double(pair.bhat(i));
    low.c(i) = to_double(pair.c(i));
    high.c(i) = low.c(i);
  }

  IntegrationTrace trace;
  VecD y = y0;
  VecD eps = VecD::Zero(problem.dim);
  VecD eps_prev = eps;
  long n = 0;
  double t = t0;
  const double t_eps = 1e-12 * std::max(1.0, std::abs(T));
  while (T - t > t_eps) {
    double h = std::min(dt, T - t);
    VecD y_low = rk_step(low, problem, t, y, h);
    VecD y_high = rk_step(high, problem, t, y, h);
    // forcing d_{p+1} dt^p = (higher-order minus advancing solution) / dt
    VecD forcing = (y_high - y_low) / h;
    MatD J = problem.jacobian(t, y);
    OdeProblem error_ode;
    error_ode.dim = problem.dim;
    error_ode.f = [&J, &forcing](double, const VecD& e) { return VecD(J * e + forcing); };
    eps_prev = eps;
    eps = rk_step(low, error_ode, t, eps, h);
    y = y_low;
    ++n;
    t = (h == dt) ? t0 + n * dt : T;
    if (T - t <= t_eps) t = T;

    StepRecord rec;
    rec.n = static_cast<int>(n);
    rec.t = t;
    rec.dt = h;
    rec.y = y;
    rec.eps_global = eps;
    rec.eps_local = eps - eps_prev;
    rec.y_hat = y + eps;
    if (problem.has_exact()) rec.true_err = VecD(problem.exact(t) - y);
    trace.steps.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace glmgee
