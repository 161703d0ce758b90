#include <doctest.h>

#include "glmgee/catalog.hpp"
#include "glmgee/order.hpp"

using namespace glmgee;

namespace {

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("catalog loads and self-checks every entry") {
  // get() triggers validate + verify_order against the declared properties
  auto methods = catalog::list();
  CHECK(methods.size() >= 7);
  for (const auto& m : methods) CHECK_NOTHROW(catalog::get(m.name));
}

TEST_CASE("unknown names produce a lookup error listing the catalog") {
  CHECK_THROWS_WITH_AS(catalog::get("nope"),
                       doctest::Contains("available:"), std::out_of_range);
}

TEST_CASE("named entries carry the published coefficients") {
  SUBCASE("GLM-s3-p2-g0 second B row") {
    const TableauQ& t = catalog::get("GLM-s3-p2-g0").tableau;
    CHECK(t.B(1, 0) == q(1, 12));
    CHECK(t.B(1, 1) == q(1, 12));
    CHECK(t.B(1, 2) == q(-1, 6));
  }
  SUBCASE("GLM-A2 U second column") {
    const TableauQ& t = catalog::get("GLM-A2").tableau;
    CHECK(t.U(0, 1) == q(4));
    CHECK(t.U(1, 1) == 0);
    CHECK(t.U(2, 1) == 0);
  }
  SUBCASE("RK32G1-GL composite row six of A") {
    const TableauQ& t = catalog::get("RK32G1-GL").tableau;
    CHECK(t.s == 8);
    CHECK(t.A(5, 0) == q(-7, 24));
    CHECK(t.A(5, 1) == q(1, 3));
    CHECK(t.A(5, 2) == q(1, 12));
    CHECK(t.A(5, 3) == q(-1, 8));
    CHECK(t.A(5, 4) == q(1, 2));
  }
  SUBCASE("third-order method keeps its 40-digit fractions exactly") {
    const TableauQ& t = catalog::get("GLM-s5-p3-g0").tableau;
    CHECK(t.A(1, 0) == parse_rational("-2169604947363702313/24313474998937147335"));
    CHECK(to_string(t.A(1, 0)) == "-2169604947363702313/24313474998937147335");
    CHECK(t.order == 3);
    CHECK(t.gamma == 0);
    CHECK(t.s == 5);
  }
}

TEST_CASE("list is deterministic and annotated") {
  auto a = catalog::list();
  auto b = catalog::list();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].name == b[i].name);
  bool has_s5 = false;
  for (const auto& m : a)
    if (m.name == "GLM-s5-p3-g0") {
      has_s5 = true;
      CHECK(m.order == 3);
      CHECK(m.gamma == 0.0);
    }
  CHECK(has_s5);
}

TEST_CASE("catalog consistency is exact in rational arithmetic") {
  for (const auto& m : catalog::list()) {
    const TableauQ& t = catalog::get(m.name).tableau;
    ValidationReport rep = validate(t);
    CHECK(rep.residual("preconsistency") == 0.0);
    CHECK(rep.residual("consistency") == 0.0);
  }
}

TEST_CASE("the appendix triplet is stored as three plain RK tableaux") {
  const RkTriplet<Rational>& t = catalog::prince_triplet();
  CHECK(t.S.b(0) == q(-1, 30));
  CHECK(t.S.b(1) == q(1, 2));
  CHECK(t.S.b(2) == q(8, 15));
  CHECK(t.M.b(0) == q(2, 3));
  CHECK(t.M.b(1) == q(-1));
  CHECK(t.M.b(2) == q(4, 3));
  // finisher weights sum to one with the second-order bias b'c = 5/12
  CHECK(t.F.b.sum() == 1);
  CHECK(t.F.b.dot(t.F.c) == q(5, 12));
  CHECK(t.F.b(1) == q(-31, 42));
  CHECK(t.F.b(2) == q(22, 21));
}

TEST_CASE("RK32G1 dense output blocks satisfy the derivative relation") {
  const RkWithDenseOutput<Rational>& rk = catalog::rk32g1();
  CHECK_NOTHROW(rk.check_dims());
  CHECK(rk.Bstar(0, 0) == 1);
  CHECK(rk.Dstar(0, 2) == q(2));      // 3 * 2/3
  CHECK(rk.Dstar(3, 1) == q(-2));     // 2 * -1
  // interpolant weights at theta = 1 reproduce the propagating weights
  for (int i = 0; i < 4; ++i) {
    Rational sum(0);
    for (int j = 0; j < 3; ++j) sum += rk.Bstar(i, j);
    CHECK(sum == rk.rk.b(i));
  }
}
