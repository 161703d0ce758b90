#include <doctest.h>

#include <cmath>
#include <complex>

#include "glmgee/catalog.hpp"
#include "glmgee/integrator.hpp"
#include "glmgee/stability.hpp"

using namespace glmgee;

TEST_CASE("R(0) is the identity for every catalog method") {
  for (const auto& m : catalog::list()) {
    MatC R = stability_matrix(to_double(catalog::get(m.name).tableau), Complex(0, 0));
    CHECK((R - MatC::Identity(R.rows(), R.cols())).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("plain RK4 stability polynomial") {
  TableauD rk4 = to_double(catalog::classical_rk4().as_glm());
  for (Complex z : {Complex(0.3, 0.0), Complex(-1.0, 0.5), Complex(0.0, 2.0), Complex(-2.5, -1.0)}) {
    Complex expected = 1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0;
    MatC R = stability_matrix(rk4, z);
    CHECK(std::abs(R(0, 0) - expected) <= 1e-14 * std::max(1.0, std::abs(expected)));
    // Phi(w, z) = w - R(z) for r = 1
    CHECK(std::abs(stability_function(rk4, expected, z)) <= 1e-13);
  }
}

TEST_CASE("resolvent and Neumann evaluations agree on |z| <= 4") {
  TableauD t = to_double(catalog::get("GLM-A9").tableau);
  for (double re = -4.0; re <= 4.0; re += 1.0)
    for (double im = -4.0; im <= 4.0; im += 1.0) {
      Complex z(re, im);
      if (std::abs(z) > 4.0) continue;
      MatC a = stability_matrix(t, z);
      MatC b = stability_matrix_resolvent(t, z);
      CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-13 * std::max(1.0, a.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("Phi(w, 0) = (w - 1)^r") {
  TableauD t = to_double(catalog::get("GLM-s3-p2-g0").tableau);
  for (Complex w : {Complex(0.3, 1.0), Complex(-2.0, 0.1)}) {
    Complex expected = (w - 1.0) * (w - 1.0);
    CHECK(std::abs(stability_function(t, w, Complex(0, 0)) - expected) <= 1e-14);
  }
}

TEST_CASE("stability points used in the linear test figure") {
  TableauD t = to_double(catalog::get("GLM-A2").tableau);
  double rho_in = spectral_radius(stability_matrix(t, 0.75 * Complex(-1.0, 1.0)));
  double rho_out = spectral_radius(stability_matrix(t, Complex(-1.0, 1.0)));
  CHECK(rho_in <= 1.0);
  CHECK(rho_out > 1.0);
}

TEST_CASE("explicit methods are unstable far out on the negative real axis") {
  for (const char* name : {"GLM-s3-p2-g0", "GLM-A2", "GLM-A4", "GLM-A9", "GLM-s5-p3-g0"}) {
    TableauD t = to_double(catalog::get(name).tableau);
    CHECK(spectral_radius(stability_matrix(t, Complex(-100.0, 0.0))) > 1.0);
  }
}

TEST_CASE("scan region basics and grid continuity") {
  TableauD t = to_double(catalog::get("GLM-A2").tableau);
  StabilityScan scan = scan_region(t, -4.0, 1.0, -3.0, 3.0, 400, 400);
  // origin cell inside for a consistent method
  bool origin_near_inside = false;
  for (int i = 0; i < scan.n_im; ++i)
    for (int j = 0; j < scan.n_re; ++j)
      if (std::abs(scan.re_at(j)) < 0.01 && std::abs(scan.im_at(i)) < 0.01)
        origin_near_inside = scan.inside(i, j);
  CHECK(origin_near_inside);
  // neighboring spectral radii stay close (eigenvalue ordering sanity)
  int worst_jump_violations = 0;
  for (int i = 0; i < scan.n_im; ++i)
    for (int j = 0; j + 1 < scan.n_re; ++j)
      if (std::abs(scan.rho(i, j + 1) - scan.rho(i, j)) >= 0.5) ++worst_jump_violations;
  CHECK(worst_jump_violations == 0);
  // consistency with the two point checks: columns sweep re, rows sweep im
  StabilityScan fine = scan_region(t, -1.0, -0.75, 0.75, 1.0, 2, 2);
  CHECK(fine.inside(0, 1));        // z = -0.75 + 0.75i
  CHECK_FALSE(fine.inside(1, 0));  // z = -1 + i
}

TEST_CASE("stability order estimates") {
  SUBCASE("classical RK4 gives q = 5") {
    StabilityOrderReport rep = stability_order(to_double(catalog::classical_rk4().as_glm()));
    REQUIRE(rep.order.has_value());
    CHECK(*rep.order == 5);
  }
  SUBCASE("gamma-0 pair reaches at least p + 1") {
    StabilityOrderReport rep = stability_order(to_double(catalog::get("GLM-s3-p2-g0").tableau));
    REQUIRE(rep.order.has_value());
    CHECK(*rep.order >= 3);
  }
  SUBCASE("B = 0 with V = I gives q = r") {
    TableauD t = to_double(catalog::get("GLM-A2").tableau);
    t.B.setZero();
    StabilityOrderReport rep = stability_order(t);
    REQUIRE(rep.order.has_value());
    CHECK(*rep.order == 2);  // Phi(e^z, z) = (e^z - 1)^2
  }
}

TEST_CASE("linear-test integrations diverge exactly where rho exceeds one") {
  TableauD t = to_double(catalog::get("GLM-A2").tableau);
  for (double scale : {0.25, 0.5, 0.75, 1.0}) {
    // lambda dt = scale*(-1 + i) realized as a = -1, b = 1, dt = scale
    VecD y0(2);
    y0 << 0.0, 1.0;
    OdeProblem p = problems::lstab2(-1.0, 1.0, y0);
    double rho = spectral_radius(stability_matrix(t, scale * Complex(-1.0, 1.0)));
    bool diverged = false;
    GeeState s = initial_state(t, p, 0.0, p.y0);
    for (int n = 0; n < 200 && !diverged; ++n) {
      s = step(t, p, s, scale);
      if (max_norm(s.slots[0]) > 1e6) diverged = true;
    }
    CHECK(diverged == (rho > 1.0));
  }
}
