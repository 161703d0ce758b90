#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "glmgee/rational.hpp"

namespace glmgee {

enum class TableauForm { Yeps, Yytilde, PlainRK };

inline const char* form_name(TableauForm f) {
  switch (f) {
    case TableauForm::Yeps: return "yeps";
    case TableauForm::Yytilde: return "yytilde";
    case TableauForm::PlainRK: return "rk";
  }
  return "?";
}

inline TableauForm form_from_name(const std::string& s) {
  if (s == "yeps") return TableauForm::Yeps;
  if (s == "yytilde") return TableauForm::Yytilde;
  if (s == "rk") return TableauForm::PlainRK;
  throw std::invalid_argument("unknown tableau form: " + s);
}

/// General linear method coefficients (A, U, B, V) with s stages and r carried
/// values. gamma is the fixed ratio between the truncation errors of the two
/// carried quantities; order is the declared order of the primary output.
template <class Scalar>
struct Tableau {
  std::string name;
  TableauForm form = TableauForm::PlainRK;
  int s = 0;
  int r = 1;
  Mat<Scalar> A, U, B, V;
  Scalar gamma{0};
  int order = 0;

  void check_dims() const {
    if (s <= 0 || r <= 0 || A.rows() != s || A.cols() != s || U.rows() != s ||
        U.cols() != r || B.rows() != r || B.cols() != s || V.rows() != r || V.cols() != r)
      throw std::invalid_argument("tableau '" + name + "': inconsistent block dimensions");
  }

  bool is_explicit() const {
    for (int i = 0; i < s; ++i)
      for (int j = i; j < s; ++j)
        if (A(i, j) != Scalar(0)) return false;
    return true;
  }
};

using TableauQ = Tableau<Rational>;
using TableauD = Tableau<double>;

inline TableauD to_double(const TableauQ& t) {
  TableauD d;
  d.name = t.name;
  d.form = t.form;
  d.s = t.s;
  d.r = t.r;
  d.A = to_double(t.A);
  d.U = to_double(t.U);
  d.B = to_double(t.B);
  d.V = to_double(t.V);
  d.gamma = to_double(t.gamma);
  d.order = t.order;
  return d;
}

/// Weights of the carried quantities in powers of dt: slot i enters the step
/// as q0[i]*y(t) + dt*q1[i]*y'(t) + O(dt^2).
template <class Scalar>
struct PreconsistencyVectors {
  Vec<Scalar> q0, q1;
};

/// Yeps carries (solution, error), Yytilde two solutions, PlainRK one.
template <class Scalar>
PreconsistencyVectors<Scalar> default_preconsistency(TableauForm form, int r) {
  PreconsistencyVectors<Scalar> q;
  q.q0 = Vec<Scalar>::Zero(r);
  q.q1 = Vec<Scalar>::Zero(r);
  switch (form) {
    case TableauForm::PlainRK:
      q.q0(0) = Scalar(1);
      break;
    case TableauForm::Yeps:
      q.q0(0) = Scalar(1);
      break;
    case TableauForm::Yytilde:
      for (int i = 0; i < r; ++i) q.q0(i) = Scalar(1);
      break;
  }
  return q;
}

struct DecouplingReport {
  bool BU_diagonal = false;
  bool BAU_diagonal = false;
  bool BdiagA1U_diagonal = false;
};

struct ValidationReport {
  bool consistency_ok = false;
  bool preconsistency_ok = false;
  VecD abscissae;
  DecouplingReport decoupling;
  std::vector<std::pair<std::string, double>> residuals;

  double residual(const std::string& key) const {
    for (const auto& [k, v] : residuals)
      if (k == key) return v;
    throw std::invalid_argument("no residual named " + key);
  }
};

namespace detail {
template <class Scalar>
double max_abs(const Mat<Scalar>& m) {
  double worst = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(to_double(m(i, j))));
  return worst;
}

template <class Scalar>
double max_offdiag(const Mat<Scalar>& m) {
  double worst = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j) worst = std::max(worst, std::abs(to_double(m(i, j))));
  return worst;
}
}  // namespace detail

inline constexpr double kValidateTol = 1e-12;

/// Checks U*q0 = 1, B*1 = q0, computes the abscissae c = A*1 + U*q1, and
/// reports the off-diagonal magnitudes of B*U, B*A*U and B*diag(A*1)*U.
/// Structural problems throw; numerical content only shows up as residuals.
template <class Scalar>
ValidationReport validate(const Tableau<Scalar>& t, const PreconsistencyVectors<Scalar>& q,
                          double tol = kValidateTol) {
  t.check_dims();
  if (q.q0.size() != t.r || q.q1.size() != t.r)
    throw std::invalid_argument("preconsistency vectors do not match r");

  ValidationReport rep;
  Vec<Scalar> ones_s = Vec<Scalar>::Constant(t.s, Scalar(1));
  Mat<Scalar> pre = t.U * q.q0 - ones_s;             // U q0 - 1
  Mat<Scalar> cons = t.B * ones_s - q.q0;            // B 1 - q0
  Vec<Scalar> c = t.A * ones_s + t.U * q.q1;
  rep.abscissae.resize(t.s);
  for (int i = 0; i < t.s; ++i) rep.abscissae(i) = to_double(c(i));

  Mat<Scalar> BU = t.B * t.U;
  Mat<Scalar> BAU = t.B * t.A * t.U;
  Vec<Scalar> a1 = t.A * ones_s;
  Mat<Scalar> BdU = t.B * a1.asDiagonal() * t.U;

  double r_pre = detail::max_abs<Scalar>(pre);
  double r_cons = detail::max_abs<Scalar>(cons);
  double r_bu = detail::max_offdiag(BU);
  double r_bau = detail::max_offdiag(BAU);
  double r_bdu = detail::max_offdiag(BdU);
  rep.residuals = {{"preconsistency", r_pre},
                   {"consistency", r_cons},
                   {"BU_offdiag", r_bu},
                   {"BAU_offdiag", r_bau},
                   {"BdiagA1U_offdiag", r_bdu}};
  rep.preconsistency_ok = r_pre <= tol;
  rep.consistency_ok = r_cons <= tol;
  rep.decoupling.BU_diagonal = r_bu <= tol;
  rep.decoupling.BAU_diagonal = r_bau <= tol;
  rep.decoupling.BdiagA1U_diagonal = r_bdu <= tol;
  return rep;
}

template <class Scalar>
ValidationReport validate(const Tableau<Scalar>& t, double tol = kValidateTol) {
  return validate(t, default_preconsistency<Scalar>(t.form, t.r), tol);
}

/// GLyeps -> GLyytilde. A and V are unchanged; U picks up T^-1 on the right
/// and B picks up T = [[1,0],[1,1-gamma]] on the left. Unique for gamma != 1.
template <class Scalar>
Tableau<Scalar> to_yytilde(const Tableau<Scalar>& t) {
  t.check_dims();
  if (t.form != TableauForm::Yeps)
    throw std::invalid_argument("to_yytilde expects a GLyeps tableau");
  if (t.r != 2) throw std::invalid_argument("to_yytilde expects r = 2");
  if (t.gamma == Scalar(1)) throw std::domain_error("to_yytilde: transform singular at gamma = 1");

  Scalar g = Scalar(1) / (Scalar(1) - t.gamma);
  Tableau<Scalar> out = t;
  out.form = TableauForm::Yytilde;
  // U T^-1 with T^-1 = [[1,0],[-g,g]]
  for (int i = 0; i < t.s; ++i) {
    out.U(i, 0) = t.U(i, 0) - g * t.U(i, 1);
    out.U(i, 1) = g * t.U(i, 1);
  }
  // T B
  for (int j = 0; j < t.s; ++j) {
    out.B(0, j) = t.B(0, j);
    out.B(1, j) = t.B(0, j) + (Scalar(1) - t.gamma) * t.B(1, j);
  }
  return out;
}

/// Exact inverse of to_yytilde.
template <class Scalar>
Tableau<Scalar> to_yeps(const Tableau<Scalar>& t) {
  t.check_dims();
  if (t.form != TableauForm::Yytilde)
    throw std::invalid_argument("to_yeps expects a GLyytilde tableau");
  if (t.r != 2) throw std::invalid_argument("to_yeps expects r = 2");
  if (t.gamma == Scalar(1)) throw std::domain_error("to_yeps: transform singular at gamma = 1");

  Scalar g = Scalar(1) / (Scalar(1) - t.gamma);
  Tableau<Scalar> out = t;
  out.form = TableauForm::Yeps;
  // U T
  for (int i = 0; i < t.s; ++i) {
    out.U(i, 0) = t.U(i, 0) + t.U(i, 1);
    out.U(i, 1) = (Scalar(1) - t.gamma) * t.U(i, 1);
  }
  // T^-1 B
  for (int j = 0; j < t.s; ++j) {
    out.B(0, j) = t.B(0, j);
    out.B(1, j) = g * (t.B(1, j) - t.B(0, j));
  }
  return out;
}

}  // namespace glmgee
