#pragma once

#include <gmpxx.h>

#include <Eigen/Dense>

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace Eigen {

// Exact rational scalar support; costs are rough relative weights only.
template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
};

}  // namespace Eigen

namespace glmgee {

using Rational = mpq_class;
using BigInt = mpz_class;

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatQ = Mat<Rational>;
using VecQ = Vec<Rational>;
using MatD = Eigen::MatrixXd;
using VecD = Eigen::VectorXd;

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

inline MatD to_double(const MatQ& m) {
  MatD out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
  return out;
}

/// Parses "num/den", plain integers, and decimal/scientific literals into an
/// exact rational ("0.25" -> 1/4, "1.3e-2" -> 13/1000).
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_rational: empty string");
  if (text.find('/') != std::string::npos) {
    Rational q;
    if (mpq_set_str(q.get_mpq_t(), text.c_str(), 10) != 0)
      throw std::invalid_argument("parse_rational: bad literal " + text);
    q.canonicalize();
    return q;
  }
  std::string digits;
  digits.reserve(text.size());
  long frac_digits = 0;
  long exponent = 0;
  bool negative = false, in_frac = false;
  std::size_t i = 0;
  if (text[i] == '+' || text[i] == '-') negative = text[i++] == '-';
  for (; i < text.size(); ++i) {
    char ch = text[i];
    if (ch == '.') {
      if (in_frac) throw std::invalid_argument("parse_rational: bad literal " + text);
      in_frac = true;
    } else if (ch == 'e' || ch == 'E') {
      exponent = std::strtol(text.c_str() + i + 1, nullptr, 10);
      break;
    } else if (ch >= '0' && ch <= '9') {
      digits.push_back(ch);
      if (in_frac) ++frac_digits;
    } else {
      throw std::invalid_argument("parse_rational: bad literal " + text);
    }
  }
  if (digits.empty()) throw std::invalid_argument("parse_rational: bad literal " + text);
  BigInt mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  long pow10 = exponent - frac_digits;
  BigInt num = mantissa, den = 1;
  for (long k = 0; k < pow10; ++k) num *= 10;
  for (long k = 0; k > pow10; --k) den *= 10;
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace glmgee
