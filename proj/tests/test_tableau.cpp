#include <doctest.h>

#include "glmgee/catalog.hpp"
#include "glmgee/tableau.hpp"

using namespace glmgee;

namespace {

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("GLM-s3-p2-g0 validates: B row sums are (1, 0) and BU is diagonal") {
  const TableauQ& t = catalog::get("GLM-s3-p2-g0").tableau;
  ValidationReport rep = validate(t);
  CHECK(rep.consistency_ok);
  CHECK(rep.preconsistency_ok);
  CHECK(rep.residual("consistency") == 0.0);
  CHECK(rep.decoupling.BU_diagonal);
  // abscissae c = A*1
  CHECK(rep.abscissae(0) == doctest::Approx(0.0));
  CHECK(rep.abscissae(1) == doctest::Approx(1.0));
  CHECK(rep.abscissae(2) == doctest::Approx(0.5));
}

TEST_CASE("zero-B tableau with q0 = 0 is trivially consistent") {
  TableauQ t;
  t.name = "zeroB";
  t.form = TableauForm::Yeps;
  t.s = 2;
  t.r = 2;
  t.A = MatQ::Zero(2, 2);
  t.U = MatQ::Zero(2, 2);
  t.B = MatQ::Zero(2, 2);
  t.V = MatQ::Identity(2, 2);
  PreconsistencyVectors<Rational> pv{VecQ::Zero(2), VecQ::Zero(2)};
  ValidationReport rep = validate(t, pv);
  CHECK(rep.consistency_ok);  // B*1 = 0 = q0
  CHECK_FALSE(rep.preconsistency_ok);  // U*q0 = 0 != 1
}

TEST_CASE("validate rejects dimension mismatches structurally") {
  TableauQ t = catalog::get("GLM-A2").tableau;
  t.U = MatQ::Zero(2, 2);  // wrong row count
  CHECK_THROWS_AS(validate(t), std::invalid_argument);
}

TEST_CASE("transform of the gamma-0 pair reproduces the published ytilde form") {
  TableauQ t = to_yytilde(catalog::get("GLM-s3-p2-g0").tableau);
  const TableauQ& yy = catalog::get("GLM-s3-p2-g0-yy").tableau;
  CHECK(t.U(0, 0) == q(1));
  CHECK(t.U(1, 0) == q(-9));
  CHECK(t.U(1, 1) == q(10));
  CHECK(t.U(2, 0) == q(2));
  CHECK(t.U(2, 1) == q(-1));
  CHECK(t.B(1, 0) == q(1, 6));
  CHECK(t.B(1, 1) == q(1, 6));
  CHECK(t.B(1, 2) == q(2, 3));
  CHECK(t.A == yy.A);
  CHECK(t.U == yy.U);
  CHECK(t.B == yy.B);
  CHECK(t.V == yy.V);
}

TEST_CASE("yeps <-> yytilde round trip is the identity in rational arithmetic") {
  for (const auto& m : catalog::list()) {
    const TableauQ& t = catalog::get(m.name).tableau;
    if (t.form == TableauForm::Yeps) {
      TableauQ back = to_yeps(to_yytilde(t));
      CHECK(back.A == t.A);
      CHECK(back.U == t.U);
      CHECK(back.B == t.B);
      CHECK(back.V == t.V);
    } else if (t.form == TableauForm::Yytilde) {
      TableauQ back = to_yytilde(to_yeps(t));
      CHECK(back.A == t.A);
      CHECK(back.U == t.U);
      CHECK(back.B == t.B);
    }
  }
}

TEST_CASE("transform preserves A and V and rejects gamma = 1") {
  TableauQ t = catalog::get("GLM-A4").tableau;  // gamma = 1/2
  TableauQ yy = to_yytilde(t);
  CHECK(yy.A == t.A);
  CHECK(yy.V == t.V);
  t.gamma = 1;
  CHECK_THROWS_AS(to_yytilde(t), std::domain_error);
}

TEST_CASE("transform of a duplicated-solution degenerate tableau") {
  // U second column zero and B second row zero with gamma = 0: the ytilde
  // slot becomes a plain copy of the solution row.
  TableauQ t;
  t.name = "dup";
  t.form = TableauForm::Yeps;
  t.s = 2;
  t.r = 2;
  t.A = MatQ::Zero(2, 2);
  t.A(1, 0) = 1;
  t.U = MatQ::Zero(2, 2);
  t.U.col(0).setConstant(Rational(1));
  t.B = MatQ::Zero(2, 2);
  t.B(0, 0) = q(1, 2);
  t.B(0, 1) = q(1, 2);
  t.V = MatQ::Identity(2, 2);
  TableauQ yy = to_yytilde(t);
  CHECK(yy.U == t.U);
  CHECK(yy.B.row(1) == yy.B.row(0));
}
