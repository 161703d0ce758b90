#include "glmgee/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <ostream>
#include <sstream>

namespace glmgee::io {
namespace {

using nlohmann::json;

template <class Scalar, class Fmt>
json matrix_to_json(const Mat<Scalar>& m, Fmt fmt) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(fmt(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class Scalar, class Fmt>
json tableau_json_impl(const Tableau<Scalar>& t, Fmt fmt) {
  json j;
  j["name"] = t.name;
  j["s"] = t.s;
  j["r"] = t.r;
  j["form"] = form_name(t.form);
  j["gamma"] = fmt(t.gamma);
  j["p"] = t.order;
  j["A"] = matrix_to_json(t.A, fmt);
  j["U"] = matrix_to_json(t.U, fmt);
  j["B"] = matrix_to_json(t.B, fmt);
  j["V"] = matrix_to_json(t.V, fmt);
  return j;
}

MatQ matrix_from_json(const json& rows) {
  int nr = static_cast<int>(rows.size());
  int nc = nr > 0 ? static_cast<int>(rows[0].size()) : 0;
  MatQ m(nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) {
      const json& cell = rows[i][j];
      if (cell.is_string())
        m(i, j) = parse_rational(cell.get<std::string>());
      else
        m(i, j) = parse_rational(cell.dump());
    }
  return m;
}

void csv_columns(std::ostream& os, const std::string& prefix, Eigen::Index m) {
  for (Eigen::Index k = 0; k < m; ++k) os << "," << prefix << "_" << k + 1;
}

void csv_values(std::ostream& os, const VecD& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) os << "," << format_double(v(k));
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string tableau_to_json(const TableauQ& t) {
  return tableau_json_impl(t, [](const Rational& v) { return to_string(v); }).dump(2);
}

std::string tableau_to_json(const TableauD& t) {
  return tableau_json_impl(t, [](double v) { return format_double(v); }).dump(2);
}

std::string order_report_to_json(const OrderReport& rep) {
  json j;
  j["order_y"] = rep.order_y;
  j["order_companion"] = rep.order_companion;
  j["gamma_relation_ok"] = rep.gamma_relation_ok;
  j["independence_ok"] = rep.independence_ok;
  j["max_order_checked"] = rep.max_order_checked;
  json dec;
  dec["BU_diagonal"] = rep.decoupling.BU_diagonal;
  dec["BAU_diagonal"] = rep.decoupling.BAU_diagonal;
  dec["BdiagA1U_diagonal"] = rep.decoupling.BdiagA1U_diagonal;
  j["decoupling"] = dec;
  json worst = json::object();
  for (const auto& [order, res] : rep.worst_residual_per_order)
    worst[std::to_string(order)] = res;
  j["worst_residual_per_order"] = worst;
  return j.dump(2);
}

TableauQ tableau_from_json(const std::string& text) {
  json j = json::parse(text);
  TableauQ t;
  t.name = j.at("name").get<std::string>();
  t.form = form_from_name(j.at("form").get<std::string>());
  t.s = j.at("s").get<int>();
  t.r = j.at("r").get<int>();
  t.order = j.at("p").get<int>();
  const json& g = j.at("gamma");
  t.gamma = g.is_string() ? parse_rational(g.get<std::string>()) : parse_rational(g.dump());
  t.A = matrix_from_json(j.at("A"));
  t.U = matrix_from_json(j.at("U"));
  t.B = matrix_from_json(j.at("B"));
  t.V = matrix_from_json(j.at("V"));
  t.check_dims();
  return t;
}

void write_trace_csv(std::ostream& os, const IntegrationTrace& trace, bool with_true_err) {
  Eigen::Index m = trace.steps.empty() ? 0 : trace.steps.front().y.size();
  os << "step,t,dt";
  csv_columns(os, "y", m);
  csv_columns(os, "eps_global", m);
  csv_columns(os, "eps_local", m);
  csv_columns(os, "yhat", m);
  if (with_true_err) csv_columns(os, "true_err", m);
  os << "\n";
  for (const auto& rec : trace.steps) {
    os << rec.n << "," << format_double(rec.t) << "," << format_double(rec.dt);
    csv_values(os, rec.y);
    csv_values(os, rec.eps_global);
    csv_values(os, rec.eps_local);
    csv_values(os, rec.y_hat);
    if (with_true_err) {
      if (!rec.true_err) throw std::logic_error("trace csv: missing true error column");
      csv_values(os, *rec.true_err);
    }
    os << "\n";
  }
}

std::string trace_to_json(const IntegrationTrace& trace, bool with_true_err) {
  json steps = json::array();
  auto vec = [](const VecD& v) {
    json a = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k));
    return a;
  };
  for (const auto& rec : trace.steps) {
    json s;
    s["step"] = rec.n;
    s["t"] = rec.t;
    s["dt"] = rec.dt;
    s["y"] = vec(rec.y);
    s["eps_global"] = vec(rec.eps_global);
    s["eps_local"] = vec(rec.eps_local);
    s["yhat"] = vec(rec.y_hat);
    if (with_true_err && rec.true_err) s["true_err"] = vec(*rec.true_err);
    steps.push_back(std::move(s));
  }
  json j;
  j["steps"] = std::move(steps);
  j["diverged"] = trace.diverged;
  return j.dump(2);
}

void write_convergence_csv(std::ostream& os, const ConvergenceTable& table) {
  os << "dt,err_y,err_estimate_gap,err_yhat\n";
  for (const auto& row : table.rows) {
    os << format_double(row.dt) << "," << format_double(row.err_y) << ","
       << format_double(row.err_estimate_gap) << "," << format_double(row.err_yhat) << "\n";
  }
  os << "slope," << format_double(table.slope_y) << "," << format_double(table.slope_gap) << ","
     << format_double(table.slope_yhat) << "\n";
}

void write_scan_csv(std::ostream& os, const StabilityScan& scan) {
  os << "re,im,rho,inside\n";
  for (int i = 0; i < scan.n_im; ++i)
    for (int j = 0; j < scan.n_re; ++j)
      os << format_double(scan.re_at(j)) << "," << format_double(scan.im_at(i)) << ","
         << format_double(scan.rho(i, j)) << "," << (scan.inside(i, j) ? 1 : 0) << "\n";
}

}  // namespace glmgee::io
