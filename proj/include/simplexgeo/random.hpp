#pragma once

// Seeded sampling. The engine is std::mt19937_64, whose output sequence is
// fixed by the standard; the std distributions are not, so the conversions to
// doubles, integers and permutations are spelled out here to keep reports
// byte-identical across standard libraries.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "simplexgeo/permutation.hpp"
#include "simplexgeo/simplex.hpp"

namespace simplexgeo {

using Rng = std::mt19937_64;

/// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Uniform integer in [lo, hi].
inline int uniform_int(Rng& rng, int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(rng() % span);
}

/// Fisher-Yates over {1..m}.
inline Permutation random_permutation(int m, Rng& rng) {
  std::vector<int> im(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) im[static_cast<std::size_t>(i)] = i + 1;
  for (int i = m - 1; i > 0; --i) std::swap(im[static_cast<std::size_t>(i)], im[static_cast<std::size_t>(uniform_int(rng, 0, i))]);
  return Permutation(std::move(im));
}

/// Denominator used for random rationals.
inline constexpr int kRationalGrain = 64;

/// A scalar in (lo, hi). Rationals are drawn on a grid of step (hi-lo)/kRationalGrain,
/// with lo and hi read as their shortest decimals.
template <Scalar T>
T random_scalar(Rng& rng, double lo, double hi) {
  if constexpr (is_exact_v<T>) {
    const int k = uniform_int(rng, 1, kRationalGrain - 1);
    Rational lo_r = parse_rational(format_shortest(lo));
    Rational hi_r = parse_rational(format_shortest(hi));
    return lo_r + (hi_r - lo_r) * Rational(k) / Rational(kRationalGrain);
  } else {
    double v = uniform(rng, lo, hi);
    return v == lo ? 0.5 * (lo + hi) : v;
  }
}

/// A random interior point whose weights are all >= margin. Requires (n+1)*margin < 1.
template <Scalar T>
SimplexPoint<T> random_point(int n, Rng& rng, double margin = 1e-3) {
  if (n < 1) throw GeometryError(ErrorKind::OutOfRange, "simplex dimension must be >= 1");
  if (!(margin >= 0) || !((n + 1) * margin < 1.0)) {
    throw GeometryError(ErrorKind::OutOfRange, "margin " + std::to_string(margin) + " too large for P_" + std::to_string(n));
  }
  const auto size = static_cast<std::size_t>(n + 1);
  std::vector<T> w(size);
  if constexpr (is_exact_v<T>) {
    std::vector<int> k(size);
    int total = 0;
    for (auto& v : k) total += (v = uniform_int(rng, 1, kRationalGrain));
    Rational m = Rational(std::llround(margin * 1e6)) / Rational(1000000);
    Rational free = Rational(1) - Rational(n + 1) * m;
    for (std::size_t i = 0; i < size; ++i) w[i] = m + free * Rational(k[i]) / Rational(total);
  } else {
    // Uniform on the simplex (normalized exponentials), shrunk into the margin.
    double total = 0;
    for (auto& v : w) total += (v = -std::log1p(-uniform01(rng)) + 1e-300);
    const double free = 1.0 - (n + 1) * margin;
    for (auto& v : w) v = margin + free * (v / total);
  }
  return make_point<T>(n, std::move(w));
}

/// A random tangent vector with components of order one.
template <Scalar T>
TangentVector<T> random_tangent(int n, Rng& rng) {
  if (n < 1) throw GeometryError(ErrorKind::OutOfRange, "simplex dimension must be >= 1");
  const auto size = static_cast<std::size_t>(n + 1);
  std::vector<T> x(size);
  if constexpr (is_exact_v<T>) {
    Rational s(0);
    for (std::size_t i = 0; i + 1 < size; ++i) {
      x[i] = Rational(uniform_int(rng, -kRationalGrain, kRationalGrain)) / Rational(kRationalGrain);
      s += x[i];
    }
    x[size - 1] = -s;
  } else {
    double mean = 0;
    for (auto& v : x) mean += (v = uniform(rng, -1.0, 1.0));
    mean /= static_cast<double>(size);
    for (auto& v : x) v -= mean;
  }
  return make_tangent<T>(n, std::move(x));
}

}  // namespace simplexgeo
