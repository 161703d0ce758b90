#pragma once

#include <stdexcept>
#include <string>

#include "glmgee/rational.hpp"
#include "glmgee/tableau.hpp"

namespace glmgee {

/// Plain explicit Runge-Kutta tableau (A, b, c).
template <class Scalar>
struct RkTableau {
  std::string name;
  Mat<Scalar> A;
  Vec<Scalar> b, c;
  int order = 0;

  int stages() const { return static_cast<int>(b.size()); }

  void check_dims() const {
    int s = stages();
    if (A.rows() != s || A.cols() != s || c.size() != s)
      throw std::invalid_argument("rk tableau '" + name + "': inconsistent dimensions");
  }

  /// View as an r = 1 GL method for the order/stability machinery.
  Tableau<Scalar> as_glm() const {
    check_dims();
    Tableau<Scalar> t;
    t.name = name;
    t.form = TableauForm::PlainRK;
    t.s = stages();
    t.r = 1;
    t.A = A;
    t.U = Mat<Scalar>::Constant(t.s, 1, Scalar(1));
    t.B = b.transpose();
    t.V = Mat<Scalar>::Identity(1, 1);
    t.gamma = Scalar(0);
    t.order = order;
    return t;
  }
};

using RkTableauQ = RkTableau<Rational>;
using RkTableauD = RkTableau<double>;

inline RkTableauD to_double(const RkTableauQ& rk) {
  RkTableauD d;
  d.name = rk.name;
  d.A = to_double(rk.A);
  d.b = VecD(rk.b.size());
  d.c = VecD(rk.c.size());
  for (Eigen::Index i = 0; i < rk.b.size(); ++i) d.b(i) = to_double(rk.b(i));
  for (Eigen::Index i = 0; i < rk.c.size(); ++i) d.c(i) = to_double(rk.c(i));
  d.order = rk.order;
  return d;
}

/// Explicit RK method plus its dense-output interpolation weights. Bstar(i,j)
/// holds the theta^j coefficient of stage i's interpolant weight; Dstar is the
/// matching derivative operator with Dstar(i,j) = Bstar(i,j)*(j+1) in 0-based
/// column indexing.
template <class Scalar>
struct RkWithDenseOutput {
  RkTableau<Scalar> rk;
  Mat<Scalar> Bstar;
  Mat<Scalar> Dstar;

  int interp_degree() const { return static_cast<int>(Bstar.cols()); }

  void check_dims() const {
    rk.check_dims();
    if (Bstar.rows() != rk.stages() || Dstar.rows() != Bstar.rows() ||
        Dstar.cols() != Bstar.cols())
      throw std::invalid_argument("dense output blocks do not match stage count");
    for (Eigen::Index i = 0; i < Bstar.rows(); ++i)
      for (Eigen::Index j = 0; j < Bstar.cols(); ++j)
        if (Dstar(i, j) != Bstar(i, j) * Scalar(static_cast<int>(j) + 1))
          throw std::invalid_argument("Dstar is not the derivative of Bstar");
  }
};

template <class Scalar>
Mat<Scalar> derivative_weights(const Mat<Scalar>& Bstar) {
  Mat<Scalar> D = Bstar;
  for (Eigen::Index j = 0; j < D.cols(); ++j) D.col(j) *= Scalar(static_cast<int>(j) + 1);
  return D;
}

/// Starter / main / finisher triplet for the exact-principal-error-equation
/// estimator.
template <class Scalar>
struct RkTriplet {
  std::string name;
  RkTableau<Scalar> S, M, F;
};

/// Embedded pair: b advances at order p, bhat is the order p+1 companion used
/// to estimate the local error.
template <class Scalar>
struct RkEmbeddedPair {
  std::string name;
  Mat<Scalar> A;
  Vec<Scalar> b, bhat, c;
  int order = 0;  // order of b
};

}  // namespace glmgee
