// SPDX-License-Identifier: Apache-2.0
#include "aosd/rational.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace aosd {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("malformed rational: empty string");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t num = parse_int(text.substr(0, slash), text);
    std::int64_t den = parse_int(text.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("rational with zero denominator: '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (negative) int_part.remove_prefix(1);
    if (frac_part.empty() || frac_part.size() > 15) {
      throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    }
    for (char c : frac_part) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
      }
    }
    std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part, text);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    Rational r = Rational(whole) + Rational(parse_int(frac_part, text), scale);
    return negative ? -r : r;
  }
  return Rational(parse_int(text, text));
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

int round_percent_half_up(const Rational& r) {
  // floor(100 r + 1/2) = floor((200 p + q) / (2 q))
  Rational scaled = Rational(100) * r + Rational(1, 2);
  std::int64_t q = scaled.numerator() / scaled.denominator();
  if (scaled.numerator() < 0 && scaled.numerator() % scaled.denominator() != 0) --q;
  return static_cast<int>(q);
}

}  // namespace aosd
