// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace aosd {

// All metric arithmetic is carried out in exact rationals.
using Rational = boost::rational<std::int64_t>;

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

// Accepts "p", "p/q", "-p/q" and plain decimals such as "0.25".
// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

// round(100 * r) with halves rounded up, for r >= 0.
int round_percent_half_up(const Rational& r);

inline Rational clamp01(const Rational& r) {
  if (r < Rational(0)) return Rational(0);
  if (r > Rational(1)) return Rational(1);
  return r;
}

}  // namespace aosd
