#include "glmgee/catalog.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "glmgee/order.hpp"

namespace glmgee::catalog {
namespace {

Rational q(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}
Rational qs(const char* text) { return parse_rational(text); }

MatQ zeros(int rows, int cols) { return MatQ::Zero(rows, cols); }

TableauQ make(const std::string& name, TableauForm form, int s, MatQ A, MatQ U, MatQ B,
              Rational gamma, int order) {
  TableauQ t;
  t.name = name;
  t.form = form;
  t.s = s;
  t.r = 2;
  t.A = std::move(A);
  t.U = std::move(U);
  t.B = std::move(B);
  t.V = MatQ::Identity(2, 2);
  t.gamma = std::move(gamma);
  t.order = order;
  t.check_dims();
  return t;
}

TableauQ make_s3_p2_g0() {
  MatQ A = zeros(3, 3);
  A(1, 0) = 1;
  A(2, 0) = q(1, 4);
  A(2, 1) = q(1, 4);
  MatQ U(3, 2);
  U << 1, 0, 1, 10, 1, -1;
  MatQ B(2, 3);
  B << q(1, 12), q(1, 12), q(5, 6), q(1, 12), q(1, 12), q(-1, 6);
  return make("GLM-s3-p2-g0", TableauForm::Yeps, 3, A, U, B, 0, 2);
}

TableauQ make_a2() {
  MatQ A = zeros(3, 3);
  A(1, 0) = 1;
  A(2, 0) = q(4, 9);
  A(2, 1) = q(2, 9);
  MatQ U(3, 2);
  U << 1, 4, 1, 0, 1, 0;
  MatQ B(2, 3);
  B << 0, q(-1, 2), q(3, 2), q(1, 4), q(1, 2), q(-3, 4);
  return make("GLM-A2", TableauForm::Yeps, 3, A, U, B, 0, 2);
}

TableauQ make_a4() {
  // The published A block repeats GLM-A2's third row (4/9, 2/9, 0), which
  // leaves both outputs first order and breaks the gamma = 1/2 relation.
  // (1/4, 1/4, 0) restores second order for both outputs and the exact error
  // relation at order 3; see the entry notes.
  MatQ A = zeros(3, 3);
  A(1, 0) = 1;
  A(2, 0) = q(1, 4);
  A(2, 1) = q(1, 4);
  MatQ U(3, 2);
  U << 1, q(-11, 10), 1, q(13, 30), 1, q(5, 3);
  MatQ B(2, 3);
  B << q(5, 12), q(5, 12), q(1, 6), q(-1, 4), q(-1, 4), q(1, 2);
  return make("GLM-A4", TableauForm::Yeps, 3, A, U, B, q(1, 2), 2);
}

TableauQ make_a9() {
  MatQ A = zeros(4, 4);
  A(1, 0) = q(3, 4);
  A(2, 0) = q(1, 4);
  A(2, 1) = q(29, 60);
  A(3, 0) = q(-21, 44);
  A(3, 1) = q(145, 44);
  A(3, 2) = q(-20, 11);
  MatQ U(4, 2);
  U << 0, 1, q(75, 58), q(-17, 58), 0, 1, 0, 1;
  MatQ B(2, 4);
  B << q(109, 275), q(58, 75), q(-37, 110), q(1, 6), q(3, 11), 0, q(75, 88), q(-1, 8);
  return make("GLM-A9", TableauForm::Yytilde, 4, A, U, B, 0, 2);
}

TableauQ make_s5_p3_g0() {
  MatQ A = zeros(5, 5);
  A(1, 0) = qs("-2169604947363702313/24313474998937147335");
  A(2, 0) = qs("46526746497697123895/94116917485856474137");
  A(2, 1) = qs("-10297879244026594958/49199457603717988219");
  A(3, 0) = qs("23364788935845982499/87425311444725389446");
  A(3, 1) = qs("-79205144337496116638/148994349441340815519");
  A(3, 2) = qs("40051189859317443782/36487615018004984309");
  A(4, 0) = qs("42089522664062539205/124911313006412840286");
  A(4, 1) = qs("-15074384760342762939/137927286865289746282");
  A(4, 2) = qs("-62274678522253371016/125918573676298591413");
  A(4, 3) = qs("13755475729852471739/79257927066651693390");
  MatQ U(5, 2);
  U(0, 0) = qs("70820309139834661559/80863923579509469826");
  U(0, 1) = qs("10043614439674808267/80863923579509469826");
  U(1, 0) = qs("161694774978034105510/106187653640211060371");
  U(1, 1) = qs("-55507121337823045139/106187653640211060371");
  U(2, 0) = qs("78486094644566264568/88171030896733822981");
  U(2, 1) = qs("9684936252167558413/88171030896733822981");
  U(3, 0) = qs("65394922146334854435/84570853840405479554");
  U(3, 1) = qs("19175931694070625119/84570853840405479554");
  U(4, 0) = qs("8607282770183754108/108658046436496925911");
  U(4, 1) = qs("100050763666313171803/108658046436496925911");
  MatQ B(2, 5);
  B(0, 0) = qs("61546696837458703723/56982519523786160813");
  B(0, 1) = qs("-55810892792806293355/206957624151308356511");
  B(0, 2) = qs("24061048952676379087/158739347956038723465");
  B(0, 3) = qs("3577972206874351339/7599733370677197135");
  B(1, 0) = qs("-9738262186984159168/99299082461487742983");
  B(1, 1) = qs("-32797097931948613195/61521565616362163366");
  B(1, 2) = qs("42895514606418420631/71714201188501437336");
  B(1, 3) = qs("22608567633166065068/55371917805607957003");
  // The published last-column weights leave the row sums off 1 by ~2e-40 (the
  // coefficients are 40-digit roundings). Closing each row keeps the method
  // bit-identical in double precision and makes B*1 = q0 hold exactly.
  B(0, 4) = Rational(1) - B(0, 0) - B(0, 1) - B(0, 2) - B(0, 3);
  B(1, 4) = Rational(1) - B(1, 0) - B(1, 1) - B(1, 2) - B(1, 3);
  return make("GLM-s5-p3-g0", TableauForm::Yytilde, 5, A, U, B, 0, 3);
}

RkWithDenseOutput<Rational> make_rk32g1() {
  RkWithDenseOutput<Rational> m;
  m.rk.name = "RK32G1";
  m.rk.order = 3;
  m.rk.A = zeros(4, 4);
  m.rk.A(1, 0) = q(1, 2);
  m.rk.A(2, 0) = -1;
  m.rk.A(2, 1) = 2;
  m.rk.A(3, 0) = q(1, 6);
  m.rk.A(3, 1) = q(2, 3);
  m.rk.A(3, 2) = q(1, 6);
  m.rk.b = VecQ(4);
  m.rk.b << q(1, 6), q(2, 3), q(1, 6), 0;
  m.rk.c = VecQ(4);
  m.rk.c << 0, q(1, 2), 1, 1;
  m.Bstar = MatQ(4, 3);
  m.Bstar << 1, q(-3, 2), q(2, 3), 0, 2, q(-4, 3), 0, q(1, 2), q(-1, 3), 0, -1, 1;
  m.Dstar = derivative_weights(m.Bstar);
  m.check_dims();
  return m;
}

TableauQ make_rk32g1_gl() {
  MatQ A = zeros(8, 8);
  A(1, 0) = q(1, 2);
  A(2, 0) = -1;
  A(2, 1) = 2;
  A(3, 0) = q(1, 6);
  A(3, 1) = q(2, 3);
  A(3, 2) = q(1, 6);
  A(5, 0) = q(-7, 24);
  A(5, 1) = q(1, 3);
  A(5, 2) = q(1, 12);
  A(5, 3) = q(-1, 8);
  A(5, 4) = q(1, 2);
  A(6, 0) = q(7, 6);
  A(6, 1) = q(-4, 3);
  A(6, 2) = q(-1, 3);
  A(6, 3) = q(1, 2);
  A(6, 4) = -1;
  A(6, 5) = 2;
  A(7, 4) = q(1, 6);
  A(7, 5) = q(2, 3);
  A(7, 6) = q(1, 6);
  MatQ U(8, 2);
  for (int i = 0; i < 8; ++i) {
    U(i, 0) = 1;
    U(i, 1) = i < 4 ? 0 : 1;
  }
  MatQ B = zeros(2, 8);
  B(0, 0) = q(1, 6);
  B(0, 1) = q(2, 3);
  B(0, 2) = q(1, 6);
  B(1, 0) = q(-1, 6);
  B(1, 1) = q(-2, 3);
  B(1, 2) = q(-1, 6);
  B(1, 4) = q(1, 6);
  B(1, 5) = q(2, 3);
  B(1, 6) = q(1, 6);
  return make("RK32G1-GL", TableauForm::Yeps, 8, A, U, B, 0, 3);
}

RkTableauQ make_rk(const std::string& name, MatQ A, VecQ b, VecQ c, int order) {
  RkTableauQ rk;
  rk.name = name;
  rk.A = std::move(A);
  rk.b = std::move(b);
  rk.c = std::move(c);
  rk.order = order;
  rk.check_dims();
  return rk;
}

RkTriplet<Rational> make_prince_triplet() {
  RkTriplet<Rational> t;
  t.name = "Prince-C1";
  {
    MatQ A = zeros(3, 3);
    A(1, 0) = q(1, 2);
    A(2, 1) = q(5, 8);
    VecQ b(3), c(3);
    b << q(-1, 30), q(1, 2), q(8, 15);
    c << 0, q(1, 2), q(5, 8);
    t.S = make_rk("Prince-C1-S", A, b, c, 1);
  }
  MatQ A = zeros(3, 3);
  A(1, 0) = q(1, 2);
  A(2, 0) = q(1, 2);
  A(2, 1) = q(1, 4);
  VecQ c(3);
  c << 0, q(1, 2), q(3, 4);
  {
    VecQ b(3);
    b << q(2, 3), -1, q(4, 3);
    t.M = make_rk("Prince-C1-M", A, b, c, 2);
  }
  {
    // Published first weight -29/42 makes the finisher inconsistent (weights
    // sum to -8/21); +29/42 restores sum 1 while keeping b'c = 5/12, the bias
    // that cancels the starter's 1/12 excess.
    VecQ b(3);
    b << q(29, 42), q(-31, 42), q(22, 21);
    t.F = make_rk("Prince-C1-F", A, b, c, 1);
  }
  return t;
}

RkEmbeddedPair<Rational> make_heun_euler() {
  RkEmbeddedPair<Rational> p;
  p.name = "HeunEuler12";
  p.A = zeros(2, 2);
  p.A(1, 0) = 1;
  p.b = VecQ(2);
  p.b << 1, 0;  // explicit Euler
  p.bhat = VecQ(2);
  p.bhat << q(1, 2), q(1, 2);  // Heun
  p.c = VecQ(2);
  p.c << 0, 1;
  p.order = 1;
  return p;
}

struct Store {
  std::map<std::string, CatalogEntry> entries;
  std::vector<std::string> ordering;
  RkWithDenseOutput<Rational> rk32g1 = make_rk32g1();
  RkTriplet<Rational> prince = make_prince_triplet();
  RkEmbeddedPair<Rational> heun_euler = make_heun_euler();
  RkTableauQ rk4;
  RkTableauQ midpoint;

  void add(TableauQ t, std::string source, Declared d, std::string notes = "") {
    std::string name = t.name;
    entries.emplace(name, CatalogEntry{std::move(t), std::move(source), d, std::move(notes)});
    ordering.push_back(name);
  }

  Store() {
    add(make_s3_p2_g0(), "three-stage second-order pair, gamma 0 (GLyeps)", {2, 0, 1});
    TableauQ yy = to_yytilde(make_s3_p2_g0());
    yy.name = "GLM-s3-p2-g0-yy";
    add(std::move(yy), "GLyytilde form of GLM-s3-p2-g0", {2, 0, 1});
    add(make_a2(), "three-stage second-order pair, gamma 0 (GLyeps)", {2, 0, 1});
    add(make_a4(),
        "three-stage method carrying two second-order solutions (gamma 1/2)", {2, q(1, 2), 1},
        "published A(3,:) = (4/9, 2/9, 0) fails every second-order condition; "
        "(1/4, 1/4, 0) used instead");
    add(make_a9(), "four-stage second-order pair with BU and BAU diagonal", {2, 0, 2});
    add(make_s5_p3_g0(), "five-stage third-order pair found by numerical search", {3, 0, 1},
        "40-digit coefficients; last B column closed so row sums are exactly q0");
    add(make_rk32g1_gl(), "RK3(2)G1 solving-for-correction composite", {3, 0, 1});

    MatQ A4 = zeros(4, 4);
    A4(1, 0) = q(1, 2);
    A4(2, 1) = q(1, 2);
    A4(3, 2) = 1;
    VecQ b4(4), c4(4);
    b4 << q(1, 6), q(1, 3), q(1, 3), q(1, 6);
    c4 << 0, q(1, 2), q(1, 2), 1;
    rk4 = make_rk("RK4", A4, b4, c4, 4);

    MatQ A2 = zeros(2, 2);
    A2(1, 0) = q(1, 2);
    VecQ b2(2), c2(2);
    b2 << 0, 1;
    c2 << 0, q(1, 2);
    midpoint = make_rk("Midpoint", A2, b2, c2, 2);
  }
};

void self_check(const CatalogEntry& e) {
  const TableauQ& t = e.tableau;
  ValidationReport v = validate(t);
  auto fail = [&](const std::string& what) {
    throw std::logic_error("catalog self-check failed for " + t.name + ": " + what);
  };
  if (v.residual("preconsistency") != 0.0) fail("U q0 != 1 in rational arithmetic");
  if (v.residual("consistency") != 0.0) fail("B 1 != q0 in rational arithmetic");
  OrderReport rep = verify_order(t);
  if (rep.order_y != e.declared.order) {
    std::ostringstream os;
    os << "measured order " << rep.order_y << " != declared " << e.declared.order;
    fail(os.str());
  }
  if (t.gamma != e.declared.gamma) fail("gamma mismatch");
  if (!rep.gamma_relation_ok) fail("gamma error relation does not hold at order p+1");
  int expected_companion = t.gamma == 0 ? e.declared.order + 1 : e.declared.order;
  if (rep.order_companion != expected_companion) fail("companion order mismatch");
  if (e.declared.decoupling_level >= 1 && !rep.decoupling.BU_diagonal) fail("BU not diagonal");
  if (e.declared.decoupling_level >= 2 && !rep.decoupling.BAU_diagonal) fail("BAU not diagonal");
  if (e.declared.decoupling_level >= 3 && !rep.decoupling.BdiagA1U_diagonal)
    fail("B diag(A1) U not diagonal");
}

const Store& store() {
  static const Store s = [] {
    Store st;
    for (const auto& name : st.ordering) self_check(st.entries.at(name));
    return st;
  }();
  return s;
}

}  // namespace

const CatalogEntry& get(const std::string& name) {
  const Store& s = store();
  auto it = s.entries.find(name);
  if (it == s.entries.end()) {
    std::ostringstream os;
    os << "unknown method '" << name << "'; available:";
    for (const auto& n : s.ordering) os << " " << n;
    throw std::out_of_range(os.str());
  }
  return it->second;
}

bool contains(const std::string& name) {
  const Store& s = store();
  return s.entries.count(name) > 0;
}

std::vector<ListedMethod> list() {
  const Store& s = store();
  std::vector<ListedMethod> out;
  for (const auto& name : s.ordering) {
    const CatalogEntry& e = s.entries.at(name);
    out.push_back({name, e.declared.order, to_double(e.declared.gamma), e.tableau.form});
  }
  return out;
}

const RkWithDenseOutput<Rational>& rk32g1() { return store().rk32g1; }
const RkTriplet<Rational>& prince_triplet() { return store().prince; }
const RkEmbeddedPair<Rational>& heun_euler_pair() { return store().heun_euler; }
const RkTableauQ& classical_rk4() { return store().rk4; }
const RkTableauQ& explicit_midpoint() { return store().midpoint; }

}  // namespace glmgee::catalog
