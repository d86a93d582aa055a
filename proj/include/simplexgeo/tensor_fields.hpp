#pragma once

// Symmetric (0,2)-tensor fields on P_n as evaluators
// (point, tangent, tangent) -> scalar. Pullbacks stay lazy: they capture the
// inner field and the map and evaluate through apply/differential.

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "simplexgeo/embeddings.hpp"
#include "simplexgeo/matrix.hpp"
#include "simplexgeo/simplex.hpp"

namespace simplexgeo {

enum class TensorKind { fisher, d, s, lambda_mu, pullback, cone_restricted, custom };

inline std::string_view to_string(TensorKind kind) {
  switch (kind) {
    case TensorKind::fisher: return "fisher";
    case TensorKind::d: return "d";
    case TensorKind::s: return "s";
    case TensorKind::lambda_mu: return "lm";
    case TensorKind::pullback: return "pullback";
    case TensorKind::cone_restricted: return "cone_restricted";
    case TensorKind::custom: return "custom";
  }
  return "custom";
}

template <Scalar T>
class TensorField {
 public:
  using Evaluator = std::function<T(const SimplexPoint<T>&, const TangentVector<T>&, const TangentVector<T>&)>;

  TensorField(int n, TensorKind kind, std::string label, Evaluator eval)
      : n_(n), kind_(kind), label_(std::move(label)), eval_(std::move(eval)) {
    if (n < 1) throw GeometryError(ErrorKind::OutOfRange, "tensor field on P_n needs n >= 1");
  }

  int n() const { return n_; }
  TensorKind kind() const { return kind_; }
  const std::string& label() const { return label_; }

  T operator()(const SimplexPoint<T>& p, const TangentVector<T>& X, const TangentVector<T>& Y) const {
    if (p.n() != n_ || X.n() != n_ || Y.n() != n_) {
      throw GeometryError(ErrorKind::DimensionMismatch, "tensor '" + label_ + "' lives on P_" + std::to_string(n_) +
                                                            ", got arguments on P_" + std::to_string(p.n()) + "/P_" +
                                                            std::to_string(X.n()) + "/P_" + std::to_string(Y.n()));
    }
    return eval_(p, X, Y);
  }

  T eval(const SimplexPoint<T>& p, const TangentVector<T>& X, const TangentVector<T>& Y) const { return (*this)(p, X, Y); }

 private:
  int n_;
  TensorKind kind_;
  std::string label_;
  Evaluator eval_;
};

namespace detail {

template <Scalar T>
std::string scalar_label(const T& v) {
  if constexpr (is_exact_v<T>) return to_string(v);
  else return format_shortest(v);
}

/// Returns (sum_i X^i Y^i / p(i)^2, sum_i X^i / p(i), sum_j Y^j / p(j)).
template <Scalar T>
std::tuple<T, T, T> log_sums(const SimplexPoint<T>& p, const TangentVector<T>& X, const TangentVector<T>& Y) {
  auto w = p.weights();
  auto x = X.components();
  auto y = Y.components();
  T diag(0), sx(0), sy(0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    T lx = x[i] / w[i];
    T ly = y[i] / w[i];
    diag += lx * ly;
    sx += lx;
    sy += ly;
  }
  return {diag, sx, sy};
}

}  // namespace detail

/// g^F(X, Y) = sum_i X^i Y^i / p(i).
template <Scalar T>
TensorField<T> fisher(int n) {
  return TensorField<T>(n, TensorKind::fisher, "fisher", [](const auto& p, const auto& X, const auto& Y) {
    auto w = p.weights();
    auto x = X.components();
    auto y = Y.components();
    T acc(0);
    for (std::size_t i = 0; i < w.size(); ++i) acc += x[i] * y[i] / w[i];
    return acc;
  });
}

/// A^d(X, Y) = sum_i X^i Y^i / p(i)^2.
template <Scalar T>
TensorField<T> tensor_d(int n) {
  return TensorField<T>(n, TensorKind::d, "d", [](const auto& p, const auto& X, const auto& Y) {
    return std::get<0>(detail::log_sums(p, X, Y));
  });
}

/// A^s(X, Y) = (sum_i X^i / p(i)) (sum_j Y^j / p(j)); the product of sums
/// equals the double sum over (i, j).
template <Scalar T>
TensorField<T> tensor_s(int n) {
  return TensorField<T>(n, TensorKind::s, "s", [](const auto& p, const auto& X, const auto& Y) {
    auto [diag, sx, sy] = detail::log_sums(p, X, Y);
    return T(sx * sy);
  });
}

/// A^{lambda,mu} = lambda A^d + mu A^s.
template <Scalar T>
TensorField<T> tensor_lm(int n, const T& lambda, const T& mu) {
  std::string label = "lm(" + detail::scalar_label(lambda) + "," + detail::scalar_label(mu) + ")";
  return TensorField<T>(n, TensorKind::lambda_mu, std::move(label), [lambda, mu](const auto& p, const auto& X, const auto& Y) {
    auto [diag, sx, sy] = detail::log_sums(p, X, Y);
    return T(lambda * diag + mu * sx * sy);
  });
}

template <Scalar T>
TensorField<T> zero_tensor(int n) {
  return TensorField<T>(n, TensorKind::custom, "zero", [](const auto&, const auto&, const auto&) { return T(0); });
}

template <Scalar T>
TensorField<T> custom_tensor(int n, std::string label, typename TensorField<T>::Evaluator eval) {
  return TensorField<T>(n, TensorKind::custom, std::move(label), std::move(eval));
}

/// c * field, keeping the kind of the original.
template <Scalar T>
TensorField<T> scaled(const TensorField<T>& field, const T& c) {
  return TensorField<T>(field.n(), field.kind(), detail::scalar_label(c) + "*" + field.label(),
                        [field, c](const auto& p, const auto& X, const auto& Y) { return T(c * field(p, X, Y)); });
}

/// (f^* T)(p; X, Y) = T(f(p); df X, df Y).
template <Scalar T>
TensorField<T> pullback(const TensorField<T>& field, const EmbeddingMap<T>& f) {
  if (field.n() != f.n_cod()) {
    throw GeometryError(ErrorKind::DimensionMismatch, "cannot pull back a tensor on P_" + std::to_string(field.n()) +
                                                          " along a map into P_" + std::to_string(f.n_cod()));
  }
  auto map = std::make_shared<const EmbeddingMap<T>>(f);
  return TensorField<T>(f.n_dom(), TensorKind::pullback, "pullback(" + field.label() + ")",
                        [field, map](const auto& p, const auto& X, const auto& Y) {
                          return field(simplexgeo::apply(*map, p), differential(*map, X), differential(*map, Y));
                        });
}

/// Entry (i, j) is field(p; Z_i - Z_{n+1}, Z_j - Z_{n+1}), i, j = 1..n (stored 0-based).
template <Scalar T>
DenseMatrix<T> gram(const TensorField<T>& field, const SimplexPoint<T>& p) {
  if (field.n() != p.n()) {
    throw GeometryError(ErrorKind::DimensionMismatch, "gram of a tensor on P_" + std::to_string(field.n()) +
                                                          " at a point of P_" + std::to_string(p.n()));
  }
  const int n = p.n();
  std::vector<TangentVector<T>> frame;
  frame.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) frame.push_back(z_basis<T>(n, i) - z_basis<T>(n, n + 1));
  DenseMatrix<T> g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      g.at(i, j) = field(p, frame[static_cast<std::size_t>(i)], frame[static_cast<std::size_t>(j)]);
      if (j != i) g.at(j, i) = field(p, frame[static_cast<std::size_t>(j)], frame[static_cast<std::size_t>(i)]);
    }
  }
  return g;
}

/// c^T G d for the Z-coordinates c, d of X and Y.
template <Scalar T>
T eval_from_gram(const DenseMatrix<T>& g, const TangentVector<T>& X, const TangentVector<T>& Y) {
  auto c = to_z_coords(X).c;
  auto d = to_z_coords(Y).c;
  if (static_cast<int>(c.size()) != g.rows() || static_cast<int>(d.size()) != g.cols()) {
    throw GeometryError(ErrorKind::DimensionMismatch, "gram shape " + g.shape() + " does not match tangents");
  }
  T acc(0);
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) acc += c[static_cast<std::size_t>(i)] * g.at(i, j) * d[static_cast<std::size_t>(j)];
  }
  return acc;
}

}  // namespace simplexgeo
