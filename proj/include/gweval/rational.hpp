// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "gweval/errors.hpp"

namespace gweval {

// Exact rational arithmetic for metric aggregation. Score values are
// dyadic rationals (doubles), so sums and means of them stay exact and
// algebraic identities (e.g. mean-of-means == global mean for equal
// group sizes) hold bit-for-bit after a single final rounding.
using Rational = boost::multiprecision::cpp_rational;

// Exact conversion; every finite double is a rational.
inline Rational rational_of(double v) { return Rational(v); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// "p/q" in lowest terms; integers render without the "/q" part.
inline std::string to_fraction_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline Rational parse_fraction(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(boost::multiprecision::cpp_int(text));
    }
    boost::multiprecision::cpp_int num(text.substr(0, slash));
    boost::multiprecision::cpp_int den(text.substr(slash + 1));
    if (den == 0) throw FormatError("zero denominator in fraction '" + text + "'");
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    throw FormatError("cannot parse fraction '" + text + "'");
  }
}

}  // namespace gweval
