#pragma once

// Points of the open simplex P_n and tangent vectors in ambient coordinates.
// Indices on the public surface are 1-based, matching {1, ..., n+1}.

#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "simplexgeo/error.hpp"
#include "simplexgeo/scalar.hpp"
#include "simplexgeo/tolerances.hpp"

namespace simplexgeo {

namespace detail {

inline void check_index(int i, int size, const char* what) {
  if (i < 1 || i > size) {
    throw GeometryError(ErrorKind::IndexOutOfRange,
                        std::string(what) + " index " + std::to_string(i) + " outside 1.." + std::to_string(size));
  }
}

template <Scalar T>
T sum(std::span<const T> v) {
  T s(0);
  for (const T& x : v) s += x;
  return s;
}

}  // namespace detail

/// Tag for constructors that skip validation. Only used where the invariant
/// holds by construction (column-stochastic images, linear combinations).
struct Unchecked {};

/// A strictly positive probability vector on {1, ..., n+1}.
template <Scalar T>
class SimplexPoint {
 public:
  SimplexPoint(Unchecked, std::vector<T> weights) : weights_(std::move(weights)) {}

  int n() const { return static_cast<int>(weights_.size()) - 1; }

  /// p(i), 1-based.
  const T& operator()(int i) const {
    detail::check_index(i, static_cast<int>(weights_.size()), "point");
    return weights_[static_cast<std::size_t>(i - 1)];
  }

  std::span<const T> weights() const { return weights_; }

  bool operator==(const SimplexPoint&) const = default;

 private:
  std::vector<T> weights_;
};

/// Ambient components X^i of a tangent vector of P_n; they sum to zero.
template <Scalar T>
class TangentVector {
 public:
  TangentVector(Unchecked, std::vector<T> components) : components_(std::move(components)) {}

  int n() const { return static_cast<int>(components_.size()) - 1; }

  const T& operator()(int i) const {
    detail::check_index(i, static_cast<int>(components_.size()), "tangent");
    return components_[static_cast<std::size_t>(i - 1)];
  }

  std::span<const T> components() const { return components_; }

  bool operator==(const TangentVector&) const = default;

  friend TangentVector operator+(const TangentVector& a, const TangentVector& b) {
    require_same(a, b);
    std::vector<T> out(a.components_);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += b.components_[k];
    return TangentVector(Unchecked{}, std::move(out));
  }

  friend TangentVector operator-(const TangentVector& a, const TangentVector& b) {
    require_same(a, b);
    std::vector<T> out(a.components_);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= b.components_[k];
    return TangentVector(Unchecked{}, std::move(out));
  }

  friend TangentVector operator*(const T& s, const TangentVector& a) {
    std::vector<T> out(a.components_);
    for (T& x : out) x *= s;
    return TangentVector(Unchecked{}, std::move(out));
  }
  friend TangentVector operator*(const TangentVector& a, const T& s) { return s * a; }

 private:
  static void require_same(const TangentVector& a, const TangentVector& b) {
    if (a.n() != b.n()) {
      throw GeometryError(ErrorKind::DimensionMismatch, "tangent vectors of P_" + std::to_string(a.n()) +
                                                            " and P_" + std::to_string(b.n()));
    }
  }

  std::vector<T> components_;
};

/// Coefficients of X in the frame {Z_i - Z_{n+1}}, i = 1..n.
template <Scalar T>
struct ZCoordinates {
  int n = 0;
  std::vector<T> c;
};

/// Validating constructor: all weights positive, sum within tol.construction of 1.
/// Never renormalizes.
template <Scalar T>
SimplexPoint<T> make_point(int n, std::vector<T> w, const Tolerances& tol = {}) {
  if (n < 1) throw GeometryError(ErrorKind::OutOfRange, "simplex dimension must be >= 1");
  if (static_cast<int>(w.size()) != n + 1) {
    throw GeometryError(ErrorKind::DimensionMismatch, "P_" + std::to_string(n) + " needs " + std::to_string(n + 1) +
                                                          " weights, got " + std::to_string(w.size()));
  }
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (!(w[k] > 0)) {
      throw GeometryError(ErrorKind::NonPositiveWeight, "weight " + std::to_string(k + 1) + " is not positive");
    }
  }
  T excess = detail::sum<T>(w) - T(1);
  if (!negligible(excess, tol.construction)) {
    throw GeometryError(ErrorKind::NotNormalized, "weights sum to 1 + " + std::to_string(to_double(excess)));
  }
  return SimplexPoint<T>(Unchecked{}, std::move(w));
}

/// Validating constructor: |sum| <= tol.construction * max(1, ||x||_1).
template <Scalar T>
TangentVector<T> make_tangent(int n, std::vector<T> x, const Tolerances& tol = {}) {
  if (n < 1) throw GeometryError(ErrorKind::OutOfRange, "simplex dimension must be >= 1");
  if (static_cast<int>(x.size()) != n + 1) {
    throw GeometryError(ErrorKind::DimensionMismatch, "T P_" + std::to_string(n) + " needs " + std::to_string(n + 1) +
                                                          " components, got " + std::to_string(x.size()));
  }
  T total = detail::sum<T>(x);
  if constexpr (is_exact_v<T>) {
    if (total != 0) throw GeometryError(ErrorKind::NotTangent, "components sum to " + to_string(total));
  } else {
    double l1 = 0;
    for (double v : x) l1 += std::abs(v);
    if (std::abs(total) > tol.construction * std::max(1.0, l1)) {
      throw GeometryError(ErrorKind::NotTangent, "components sum to " + std::to_string(total));
    }
  }
  return TangentVector<T>(Unchecked{}, std::move(x));
}

template <Scalar T>
TangentVector<T> zero_tangent(int n) {
  return TangentVector<T>(Unchecked{}, std::vector<T>(static_cast<std::size_t>(n + 1), T(0)));
}

/// b_n, the uniform measure.
template <Scalar T>
SimplexPoint<T> barycenter(int n) {
  if (n < 1) throw GeometryError(ErrorKind::OutOfRange, "simplex dimension must be >= 1");
  return SimplexPoint<T>(Unchecked{}, std::vector<T>(static_cast<std::size_t>(n + 1), ratio<T>(1, n + 1)));
}

/// p_u = (u, 1-u) in P_1.
template <Scalar T>
SimplexPoint<T> point_of_u(const T& u) {
  if (!(u > 0) || !(u < 1)) {
    throw GeometryError(ErrorKind::OutOfRange, "u = " + std::to_string(to_double(u)) + " is not in (0,1)");
  }
  return SimplexPoint<T>(Unchecked{}, {u, T(1 - u)});
}

/// Z_i^n with components delta_ji - 1/(n+1).
template <Scalar T>
TangentVector<T> z_basis(int n, int i) {
  if (n < 1) throw GeometryError(ErrorKind::OutOfRange, "simplex dimension must be >= 1");
  detail::check_index(i, n + 1, "Z basis");
  std::vector<T> x(static_cast<std::size_t>(n + 1), -ratio<T>(1, n + 1));
  x[static_cast<std::size_t>(i - 1)] += T(1);
  return TangentVector<T>(Unchecked{}, std::move(x));
}

template <Scalar T>
TangentVector<T> from_z_coords(const ZCoordinates<T>& c) {
  if (c.n < 1 || static_cast<int>(c.c.size()) != c.n) {
    throw GeometryError(ErrorKind::DimensionMismatch, "Z coordinates need exactly n entries");
  }
  std::vector<T> x(c.c);
  T s(0);
  for (const T& v : c.c) s += v;
  x.push_back(T(-s));
  return TangentVector<T>(Unchecked{}, std::move(x));
}

template <Scalar T>
ZCoordinates<T> to_z_coords(const TangentVector<T>& X) {
  auto comps = X.components();
  return ZCoordinates<T>{X.n(), std::vector<T>(comps.begin(), comps.end() - 1)};
}

}  // namespace simplexgeo
