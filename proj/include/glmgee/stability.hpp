#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "glmgee/tableau.hpp"

namespace glmgee {

using Complex = std::complex<double>;
using MatC = Eigen::MatrixXcd;

/// R(z) = V + z B (I - z A)^{-1} U; a polynomial in z for explicit methods,
/// evaluated through the finite Neumann sum.
MatC stability_matrix(const TableauD& t, Complex z);

/// Same quantity through an LU solve of (I - z A); kept as the independent
/// route for cross-checks. Throws on a singular resolvent.
MatC stability_matrix_resolvent(const TableauD& t, Complex z);

/// Largest eigenvalue magnitude of R(z); closed form for r <= 2.
double spectral_radius(const MatC& R);

/// Phi(w, z) = det(w I - R(z)).
Complex stability_function(const TableauD& t, Complex w, Complex z);

struct StabilityScan {
  double re_min = 0, re_max = 0, im_min = 0, im_max = 0;
  int n_re = 0, n_im = 0;
  // Row-major over the imaginary axis (rows) then real axis (columns).
  MatD rho;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> inside;

  double re_at(int j) const {
    return n_re == 1 ? re_min : re_min + (re_max - re_min) * j / (n_re - 1.0);
  }
  double im_at(int i) const {
    return n_im == 1 ? im_min : im_min + (im_max - im_min) * i / (n_im - 1.0);
  }
};

/// Deterministic row-major scan of rho(R(z)) over a rectangle. Honors the
/// GLM_GEE_THREADS environment variable for row-parallel evaluation.
StabilityScan scan_region(const TableauD& t, double re_min, double re_max, double im_min,
                          double im_max, int n_re, int n_im);

struct StabilityOrderReport {
  std::optional<int> order;  // empty when every sample sits at round-off
  bool saturated = false;
  std::vector<double> z_samples;
  std::vector<double> phi_magnitudes;
  double slope = 0.0;
};

/// Estimates q with Phi(e^z, z) = O(z^q) from a log-log slope over
/// z = 10^-1 .. 10^-6; reports ">= max" via `saturated` when the samples are
/// all round-off.
StabilityOrderReport stability_order(const TableauD& t);

}  // namespace glmgee
