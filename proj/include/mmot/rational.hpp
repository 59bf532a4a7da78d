#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <cmath>
#include <vector>

#include "mmot/errors.hpp"

namespace mmot {

/// Arbitrary-precision rational used by the exact solver mode. Expression
/// templates are disabled so arithmetic always yields a materialized value;
/// the generic solver code deduces T from subexpressions.
using Rational =
    boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                  boost::multiprecision::et_off>;

/// Lossless conversion: every finite double is a dyadic rational.
inline Rational to_rational(double x) {
  if (!std::isfinite(x)) throw NonFiniteCoordinate("cannot convert non-finite value to rational");
  return Rational(x);
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline std::vector<Rational> to_rational(const std::vector<double>& xs) {
  std::vector<Rational> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(to_rational(x));
  return out;
}

}  // namespace mmot
