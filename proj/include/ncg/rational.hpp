#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace ncg {

using Rational = boost::rational<std::int64_t>;

class AlphaParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Decimal rendering with `digits` significant digits, for display only.
inline std::string to_decimal(const Rational& r, int digits = 6) {
  const long double v =
      static_cast<long double>(r.numerator()) / static_cast<long double>(r.denominator());
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*Lg", digits, v);
  return buf;
}

namespace detail {

inline std::int64_t parse_digits(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw AlphaParseError("empty number in '" + std::string(whole) + "'");
  std::int64_t v = 0;
  for (char c : digits) {
    if (c < '0' || c > '9')
      throw AlphaParseError("unexpected character '" + std::string(1, c) + "' in '" +
                            std::string(whole) + "'");
    if (v > (std::numeric_limits<std::int64_t>::max() - (c - '0')) / 10)
      throw AlphaParseError("number too large in '" + std::string(whole) + "'");
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace detail

/// Parses "p/q", an integer, or a terminating decimal ("0.5", "1.25") into an
/// exact rational. At most 18 fractional digits are accepted.
inline Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational value;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = detail::parse_digits(text.substr(0, slash), whole);
    const auto den = detail::parse_digits(text.substr(slash + 1), whole);
    if (den == 0) throw AlphaParseError("zero denominator in '" + std::string(whole) + "'");
    value = Rational(num, den);
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto int_part = text.substr(0, dot);
    const auto frac_part = text.substr(dot + 1);
    if (frac_part.size() > 18)
      throw AlphaParseError("more than 18 fractional digits in '" + std::string(whole) + "'");
    const std::int64_t ip = int_part.empty() ? 0 : detail::parse_digits(int_part, whole);
    const std::int64_t fp = frac_part.empty() ? 0 : detail::parse_digits(frac_part, whole);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    value = Rational(ip) + Rational(fp, scale);
  } else {
    value = Rational(detail::parse_digits(text, whole));
  }
  return negative ? -value : value;
}

}  // namespace ncg
