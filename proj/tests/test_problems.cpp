#include <doctest.h>

#include <cmath>

#include "glmgee/problems.hpp"

using namespace glmgee;

namespace {

// central-difference consistency of f with the stated exact solution
void check_f_matches_exact(const OdeProblem& p, double tol = 1e-8) {
  REQUIRE(p.has_exact());
  for (int k = 0; k < 100; ++k) {
    double t = p.t0 + (p.tend - p.t0) * (k + 0.5) / 100.0;
    double h = 1e-6 * std::max(1.0, std::abs(t));
    VecD dnum = (p.exact(t + h) - p.exact(t - h)) / (2.0 * h);
    VecD f = p.f(t, p.exact(t));
    CHECK((dnum - f).cwiseAbs().maxCoeff() <= tol * std::max(1.0, f.cwiseAbs().maxCoeff()));
  }
}

}  // namespace

TEST_CASE("prince42 values") {
  OdeProblem p = problems::prince42();
  CHECK(p.exact(0.0)(0) == 0.0);
  CHECK(p.exact(M_PI_2)(0) == doctest::Approx(1.0));
  CHECK(p.f(0.0, p.exact(0.0))(0) == doctest::Approx(1.0));
  check_f_matches_exact(p);
  OdeProblem p1 = problems::prince42(1.0);
  CHECK(p1.exact(1.0)(0) == doctest::Approx(std::exp(1.0) + std::sin(1.0)));
  CHECK(p1.y0(0) == doctest::Approx(1.0));
  check_f_matches_exact(p1);
}

TEST_CASE("kulikov2013i values") {
  OdeProblem p = problems::kulikov2013i();
  CHECK((p.exact(0.0) - VecD::Ones(4)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(p.exact(std::sqrt(M_PI))(3) == doctest::Approx(-1.0));
  check_f_matches_exact(p, 1e-7);
}

TEST_CASE("hull1972b4 right-hand side and guards") {
  OdeProblem p = problems::hull1972b4();
  VecD f0 = p.f(0.0, p.y0);
  CHECK(f0(0) == doctest::Approx(0.0));
  CHECK(f0(1) == doctest::Approx(3.0));
  CHECK(f0(2) == doctest::Approx(1.0));
  // d/dt (y1^2+y2^2)/2 = -y3 * r algebraically
  VecD y(3);
  y << 1.2, -0.7, 0.4;
  VecD f = p.f(0.0, y);
  double r = std::hypot(y(0), y(1));
  CHECK(y(0) * f(0) + y(1) * f(1) == doctest::Approx(-y(2) * r));
  CHECK_THROWS_AS(p.f(0.0, VecD::Zero(3)), std::domain_error);
}

TEST_CASE("lstab2 rotation solution") {
  VecD y0(2);
  y0 << 0.0, 1.0;
  OdeProblem p = problems::lstab2(0.0, 1.0, y0);
  CHECK((p.exact(0.0) - y0).cwiseAbs().maxCoeff() == 0.0);
  VecD q = p.exact(M_PI_2);
  CHECK(q(0) == doctest::Approx(-1.0));
  CHECK(q(1) == doctest::Approx(0.0).epsilon(1e-12));
  check_f_matches_exact(p);

  OdeProblem decay = problems::lstab2(-0.5, 0.0, VecD::Ones(2));
  double prev = decay.exact(0.0).norm();
  for (double t : {0.5, 1.0, 1.5}) {
    double cur = decay.exact(t).norm();
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("tree_test closed form") {
  OdeProblem p = problems::tree_test();
  VecD e1 = p.exact(1.0);
  CHECK(e1(0) == doctest::Approx(1.0));
  CHECK(e1(1) == doctest::Approx(1.0 / 24.0));
  CHECK(e1(2) == doctest::Approx(4.0 / 5.0));
  check_f_matches_exact(p);
  MatD j = p.jacobian(0.5, p.exact(0.5));
  CHECK(j.col(1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(j.col(2).cwiseAbs().maxCoeff() == 0.0);
  OdeProblem z = problems::tree_test(0.0, 0.0);
  CHECK(z.exact(2.0)(1) == 0.0);
  CHECK(z.exact(2.0)(2) == 0.0);
}

TEST_CASE("problem lookup with parameter overrides") {
  OdeProblem p = problems::get("prince42", {{"kappa", 2.0}});
  CHECK(p.y0(0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(problems::get("unknown"), std::out_of_range);
}

TEST_CASE("reference solution self-validates against closed forms") {
  OdeProblem p = problems::prince42();
  VecD ref = problems::reference_solution(p, 1.0);  // exact path
  CHECK((ref - p.exact(1.0)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((problems::reference_solution(p, p.t0) - p.y0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("reference oracle refines until two halvings agree") {
  OdeProblem p = problems::hull1972b4();  // no closed form
  problems::ReferenceOracle oracle(p, 20.0, 0.5, 1e-11);
  CHECK(oracle.achieved_agreement() <= 1e-11 * 4.0);
  CHECK((oracle.at(0.0) - p.y0).cwiseAbs().maxCoeff() == 0.0);
  // radius invariant r' = -y3 holds along the oracle trajectory
  VecD a = oracle.at(10.0);
  CHECK(std::hypot(a(0), a(1)) > 0.1);
}
