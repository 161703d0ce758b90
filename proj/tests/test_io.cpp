#include <doctest.h>

#include <cstdint>
#include <sstream>

#include "glmgee/catalog.hpp"
#include "glmgee/io.hpp"
#include "glmgee/order.hpp"

using namespace glmgee;

namespace {

// small deterministic generator for property-style round trips
struct Lcg {
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  std::uint64_t next() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return state >> 11;
  }
  long next_small() { return static_cast<long>(next() % 2001) - 1000; }
};

}  // namespace

TEST_CASE("rational parsing covers fraction, integer and decimal forms") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-7/2") == Rational(-7, 2));
  CHECK(parse_rational("5") == Rational(5));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("-1.3e-2") == Rational(-13, 1000));
  CHECK(parse_rational("2e3") == Rational(2000));
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
}

TEST_CASE("random rationals survive the string round trip") {
  Lcg gen;
  for (int k = 0; k < 200; ++k) {
    long num = gen.next_small();
    long den = gen.next_small();
    if (den == 0) continue;
    Rational q(num, den);
    q.canonicalize();
    CHECK(parse_rational(to_string(q)) == q);
  }
}

TEST_CASE("tableau JSON round trip is exact for every catalog entry") {
  for (const auto& m : catalog::list()) {
    const TableauQ& t = catalog::get(m.name).tableau;
    TableauQ back = io::tableau_from_json(io::tableau_to_json(t));
    CHECK(back.name == t.name);
    CHECK(back.form == t.form);
    CHECK(back.s == t.s);
    CHECK(back.r == t.r);
    CHECK(back.order == t.order);
    CHECK(back.gamma == t.gamma);
    CHECK(back.A == t.A);
    CHECK(back.U == t.U);
    CHECK(back.B == t.B);
    CHECK(back.V == t.V);
  }
}

TEST_CASE("format_double round-trips binary64") {
  Lcg gen;
  for (int k = 0; k < 200; ++k) {
    double x = static_cast<double>(static_cast<std::int64_t>(gen.next())) * 1.6180339887e-7;
    CHECK(std::stod(io::format_double(x)) == x);
  }
  CHECK(std::stod(io::format_double(0.1)) == 0.1);
}

TEST_CASE("trace CSV layout and determinism") {
  OdeProblem p = problems::prince42();
  TableauD t = to_double(catalog::get("GLM-A2").tableau);
  IntegrationTrace tr = integrate(t, p, 0.0, p.y0, 0.5, StepController::fixed(0.1));
  std::ostringstream a, b;
  io::write_trace_csv(a, tr, true);
  io::write_trace_csv(b, tr, true);
  CHECK(a.str() == b.str());
  std::istringstream lines(a.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "step,t,dt,y_1,eps_global_1,eps_local_1,yhat_1,true_err_1");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == static_cast<int>(tr.steps.size()));
}

TEST_CASE("order report serializes to JSON") {
  OrderReport rep = verify_order(catalog::get("GLM-A9").tableau);
  std::string j = io::order_report_to_json(rep);
  CHECK(j.find("\"order_y\": 2") != std::string::npos);
  CHECK(j.find("\"order_companion\": 3") != std::string::npos);
  CHECK(j.find("\"BAU_diagonal\": true") != std::string::npos);
}

TEST_CASE("convergence CSV carries the slope footer") {
  OdeProblem p = problems::prince42();
  std::vector<double> dts = {0.1, 0.05, 0.025};
  ConvergenceTable table =
      convergence_study(to_double(catalog::get("GLM-A2").tableau), p, 0.0, p.y0, 2.0, dts);
  std::ostringstream os;
  io::write_convergence_csv(os, table);
  std::string text = os.str();
  CHECK(text.find("dt,err_y,err_estimate_gap,err_yhat\n") == 0);
  CHECK(text.find("\nslope,") != std::string::npos);
}
