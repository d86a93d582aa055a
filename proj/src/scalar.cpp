#include "simplexgeo/scalar.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "simplexgeo/error.hpp"

namespace simplexgeo {

using boost::multiprecision::cpp_int;

Rational exact_rational(double v) {
  if (!std::isfinite(v)) {
    throw GeometryError(ErrorKind::ParseError, "non-finite value has no rational form");
  }
  if (v == 0.0) return Rational(0);
  int exponent = 0;
  double mantissa = std::frexp(v, &exponent);
  // mantissa * 2^53 is an integer for every double.
  auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational r{cpp_int(scaled)};
  if (exponent > 0) {
    r *= Rational(cpp_int(1) << exponent);
  } else if (exponent < 0) {
    r /= Rational(cpp_int(1) << -exponent);
  }
  return r;
}

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

/// Leading zeros would select octal in cpp_int's string constructor.
cpp_int decimal(std::string_view digits) {
  const auto first = digits.find_first_not_of('0');
  return first == std::string_view::npos ? cpp_int(0) : cpp_int(std::string(digits.substr(first)));
}

cpp_int parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw GeometryError(ErrorKind::ParseError, "malformed rational '" + std::string(whole) + "'");
  }
  cpp_int value = decimal(s);
  return negative ? cpp_int(-value) : value;
}

cpp_int pow10(long long e) {
  cpp_int r = 1;
  for (long long i = 0; i < e; ++i) r *= 10;
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    cpp_int num = parse_integer(text.substr(0, slash), whole);
    cpp_int den = parse_integer(text.substr(slash + 1), whole);
    if (den == 0) throw GeometryError(ErrorKind::ParseError, "zero denominator in '" + std::string(whole) + "'");
    return Rational(num) / Rational(den);
  }

  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) {
      throw GeometryError(ErrorKind::ParseError, "malformed exponent in '" + std::string(whole) + "'");
    }
    std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (exp_negative) exponent = -exponent;
    text = text.substr(0, e);
  }
  std::string digits;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part))) {
      throw GeometryError(ErrorKind::ParseError, "malformed decimal '" + std::string(whole) + "'");
    }
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long long>(frac_part.size());
  } else {
    if (!all_digits(text)) {
      throw GeometryError(ErrorKind::ParseError, "malformed number '" + std::string(whole) + "'");
    }
    digits = std::string(text);
  }
  Rational r{decimal(digits)};
  if (exponent > 0) r *= Rational(pow10(exponent));
  if (exponent < 0) r /= Rational(pow10(-exponent));
  return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& r) { return r.str(); }

std::string format_shortest(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

}  // namespace simplexgeo
