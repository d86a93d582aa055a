#pragma once

// Scalar backends. Everything that only needs field arithmetic is templated on
// `Scalar`, so the same code runs in double precision and in exact rational
// arithmetic. Anything that takes a square root is double-only.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <string>
#include <string_view>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

namespace simplexgeo {

using Rational = boost::multiprecision::cpp_rational;

template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, Rational>;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

template <Scalar T>
double to_double(const T& v) {
  if constexpr (is_exact_v<T>) {
    return v.template convert_to<double>();
  } else {
    return v;
  }
}

/// num/den in the requested backend.
template <Scalar T>
T ratio(long long num, long long den) {
  if constexpr (is_exact_v<T>) {
    return Rational(num) / Rational(den);
  } else {
    return static_cast<double>(num) / static_cast<double>(den);
  }
}

template <Scalar T>
T abs_value(const T& v) {
  if (v < 0) return T(-v);
  return v;
}

/// |value| <= tol in floating point; value == 0 in exact arithmetic.
template <Scalar T>
bool negligible(const T& value, double tol) {
  if constexpr (is_exact_v<T>) {
    return value == 0;
  } else {
    return std::abs(value) <= tol;
  }
}

/// |a - b| / max(|a|, |b|, floor). Zero when a == b (including 0 vs 0).
template <Scalar T>
T relative_deviation(const T& a, const T& b, const T& floor = T(0)) {
  if (a == b) return T(0);
  T scale = std::max({abs_value(a), abs_value(b), abs_value(floor)});
  return abs_value(T(a - b)) / scale;
}

/// Exact value of a finite double.
Rational exact_rational(double v);

/// Parses "7", "-3/4", "0.125", "1e-3", "2.5E+2" exactly.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" for integers.
std::string to_string(const Rational& r);

/// Shortest round-trip decimal representation.
std::string format_shortest(double v);

}  // namespace simplexgeo
