#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

namespace contlogic {

/// Exact truth values and scalars. Arbitrary precision, so products of
/// long chains never overflow.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Rational rat(long long num, long long den = 1) { return Rational(num, den); }

inline bool in_unit_interval(const Rational& r) {
  return r.sign() >= 0 && boost::multiprecision::numerator(r) <= boost::multiprecision::denominator(r);
}

inline Rational clamp_unit(const Rational& r) {
  if (r < 0) return Rational(0);
  if (r > 1) return Rational(1);
  return r;
}

/// 2^(-n).
inline Rational dyadic(unsigned n) {
  Integer den = 1;
  den <<= n;
  return Rational(Integer(1), den);
}

/// Lowest-terms "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) {
  const Integer num = boost::multiprecision::numerator(r);
  const Integer den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

/// Parses "INT" or "INT/INT" (optionally with a leading '-'). No decimals.
inline std::optional<Rational> parse_rational(std::string_view text) {
  auto all_digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
  };
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  const auto slash = text.find('/');
  std::string_view num_text = text.substr(0, slash);
  std::string_view den_text = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!all_digits(num_text) || !all_digits(den_text)) return std::nullopt;
  Integer num{std::string(num_text)};
  Integer den{std::string(den_text)};
  if (den == 0) return std::nullopt;
  Rational value(num, den);
  return negative ? Rational(-value) : value;
}

}  // namespace contlogic
