#include "glmgee/stability.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

namespace glmgee {
namespace {

MatC complex_cast(const MatD& m) { return m.cast<Complex>(); }

int thread_budget() {
  const char* env = std::getenv("GLM_GEE_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n > 1 ? n : 1;
}

}  // namespace

MatC stability_matrix(const TableauD& t, Complex z) {
  t.check_dims();
  if (!t.is_explicit()) return stability_matrix_resolvent(t, z);
  // (I - zA)^-1 = sum_k (zA)^k, exact after s terms for strictly lower A.
  MatC zA = z * complex_cast(t.A);
  MatC acc = MatC::Identity(t.s, t.s);
  MatC sum = acc;
  for (int k = 1; k < t.s; ++k) {
    acc = zA * acc;
    sum += acc;
  }
  return complex_cast(t.V) + z * complex_cast(t.B) * sum * complex_cast(t.U);
}

MatC stability_matrix_resolvent(const TableauD& t, Complex z) {
  t.check_dims();
  MatC M = MatC::Identity(t.s, t.s) - z * complex_cast(t.A);
  Eigen::PartialPivLU<MatC> lu(M);
  double rcond_proxy = std::abs(lu.determinant());
  if (!(rcond_proxy > 1e-300))
    throw std::domain_error("stability_matrix: I - zA is singular at this z");
  MatC X = lu.solve(complex_cast(t.U));
  return complex_cast(t.V) + z * complex_cast(t.B) * X;
}

double spectral_radius(const MatC& R) {
  const int r = static_cast<int>(R.rows());
  if (r == 1) return std::abs(R(0, 0));
  if (r == 2) {
    Complex tr = R(0, 0) + R(1, 1);
    Complex disc = std::sqrt(tr * tr - 4.0 * (R(0, 0) * R(1, 1) - R(0, 1) * R(1, 0)));
    return std::max(std::abs((tr + disc) / 2.0), std::abs((tr - disc) / 2.0));
  }
  Eigen::ComplexEigenSolver<MatC> es(R, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Complex stability_function(const TableauD& t, Complex w, Complex z) {
  MatC R = stability_matrix(t, z);
  const int r = static_cast<int>(R.rows());
  if (r == 1) return w - R(0, 0);
  if (r == 2)
    return (w - R(0, 0)) * (w - R(1, 1)) - R(0, 1) * R(1, 0);
  MatC M = w * MatC::Identity(r, r) - R;
  return M.determinant();
}

StabilityScan scan_region(const TableauD& t, double re_min, double re_max, double im_min,
                          double im_max, int n_re, int n_im) {
  if (n_re < 1 || n_im < 1) throw std::invalid_argument("scan_region: resolutions must be >= 1");
  StabilityScan scan;
  scan.re_min = re_min;
  scan.re_max = re_max;
  scan.im_min = im_min;
  scan.im_max = im_max;
  scan.n_re = n_re;
  scan.n_im = n_im;
  scan.rho.resize(n_im, n_re);
  scan.inside.resize(n_im, n_re);

  auto fill_row = [&](int i) {
    double im = scan.im_at(i);
    for (int j = 0; j < n_re; ++j) {
      double rho = spectral_radius(stability_matrix(t, Complex(scan.re_at(j), im)));
      scan.rho(i, j) = rho;
      scan.inside(i, j) = rho <= 1.0;
    }
  };

  int threads = std::min(thread_budget(), n_im);
  if (threads <= 1) {
    for (int i = 0; i < n_im; ++i) fill_row(i);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        for (int i = w; i < n_im; i += threads) fill_row(i);
      });
    for (auto& th : pool) th.join();
  }
  return scan;
}

StabilityOrderReport stability_order(const TableauD& t) {
  StabilityOrderReport rep;
  for (int k = 1; k <= 6; ++k) {
    double z = std::pow(10.0, -k);
    double phi = std::abs(stability_function(t, std::exp(Complex(z, 0.0)), Complex(z, 0.0)));
    rep.z_samples.push_back(z);
    rep.phi_magnitudes.push_back(phi);
  }
  // fit on the leading samples that sit above round-off; high stability
  // orders push the tail below it quickly
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < rep.z_samples.size(); ++i) {
    if (rep.phi_magnitudes[i] < 1e-15) break;
    double x = std::log(rep.z_samples[i]);
    double y = std::log(rep.phi_magnitudes[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) {
    rep.saturated = true;  // only ">= k_max" is known
    return rep;
  }
  rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  rep.order = static_cast<int>(std::lround(rep.slope));
  return rep;
}

}  // namespace glmgee
