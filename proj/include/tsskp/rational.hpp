#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace tsskp {

// Exact arithmetic used for all reward/probability accounting. Instance data
// stays in int64; values become rational only through q_s and alpha.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rat rat(std::int64_t num, std::int64_t den = 1) {
  return Rat(BigInt(num), BigInt(den));
}

inline double to_double(const Rat& value) { return value.convert_to<double>(); }

/// Exact rational value of a finite double.
inline Rat rat_from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("rat_from_double: value not finite");
  return Rat(value);
}

/// Nearest integer, halves away from zero.
inline BigInt round_half_away(const Rat& value) {
  BigInt num = numerator(value);
  BigInt den = denominator(value);  // canonical: den > 0
  BigInt q = num / den;             // truncates toward zero
  BigInt r = num - q * den;
  if (r < 0) r = -r;
  if (2 * r >= den) q += (num < 0) ? -1 : 1;
  return q;
}

inline std::int64_t to_i64(const BigInt& value) {
  if (value > std::numeric_limits<std::int64_t>::max() ||
      value < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("integer out of int64 range: " + value.str());
  return value.convert_to<std::int64_t>();
}

inline std::int64_t round_half_away_i64(const Rat& value) { return to_i64(round_half_away(value)); }

/// "p/q" when the denominator is not 1, plain integer otherwise.
inline std::string rational_string(const Rat& value) {
  BigInt den = denominator(value);
  std::string out = numerator(value).str();
  if (den != 1) out += "/" + den.str();
  return out;
}

/// Fixed-point decimal with `places` digits, rounded half away from zero.
inline std::string decimal_string(const Rat& value, int places) {
  BigInt scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  BigInt scaled = round_half_away(value * Rat(scale));
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  BigInt whole = scaled / scale;
  BigInt frac = scaled % scale;
  std::string out = whole.str();
  if (places > 0) {
    std::string digits = frac.str();
    out += "." + std::string(static_cast<std::size_t>(places) - digits.size(), '0') + digits;
  }
  if (negative && (whole != 0 || frac != 0)) out.insert(out.begin(), '-');
  return out;
}

/// Shortest exact decimal when the denominator is 2^a 5^b, "p/q" otherwise.
inline std::string compact_string(const Rat& value) {
  BigInt den = denominator(value);
  int twos = 0, fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return rational_string(value);
  const int places = twos > fives ? twos : fives;
  if (places == 0) return numerator(value).str();
  return decimal_string(value, places);
}

namespace detail {
inline bool all_digits(const std::string& text) {
  if (text.empty()) return false;
  for (char c : text)
    if (c < '0' || c > '9') return false;
  return true;
}

// cpp_int's string constructor treats a leading 0 as an octal prefix.
inline BigInt digits_to_int(const std::string& digits) {
  const std::size_t first = digits.find_first_not_of('0');
  if (first == std::string::npos) return 0;
  return BigInt(digits.substr(first));
}
}  // namespace detail

/// Accepts "p/q", plain integers, and decimal strings such as "0.85".
inline Rat parse_rational(const std::string& text) {
  const auto fail = [&] { throw std::invalid_argument("not a rational number: '" + text + "'"); };
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.erase(s.begin());
  }
  if (s.empty()) fail();

  Rat value;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!detail::all_digits(num) || !detail::all_digits(den)) fail();
    BigInt d = detail::digits_to_int(den);
    if (d == 0) fail();
    value = Rat(detail::digits_to_int(num), d);
  } else if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (frac.empty()) frac = "0";
    if (!detail::all_digits(whole) || !detail::all_digits(frac)) fail();
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    value = Rat(detail::digits_to_int(whole) * scale + detail::digits_to_int(frac), scale);
  } else {
    if (!detail::all_digits(s)) fail();
    value = Rat(detail::digits_to_int(s));
  }
  return negative ? -value : value;
}

}  // namespace tsskp
