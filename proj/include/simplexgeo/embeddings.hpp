#pragma once

// Markov partitions, Markov patches and the column-stochastic maps they
// induce between simplices: Markov embeddings P_n -> P_N, patched embeddings
// P_n -> P_{n+1}, their compositions, and the scalar-patch chains H^{ij}_p
// (from P_1) and H^{ijk}_p (from P_2) that pass through a prescribed point.

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "simplexgeo/matrix.hpp"
#include "simplexgeo/permutation.hpp"
#include "simplexgeo/simplex.hpp"

namespace simplexgeo {

/// Probability measures {Q_i} on {1..N+1} with disjoint supports tiling {1..N+1}.
/// kappa(I) is the unique i with I in supp(Q_i), and q(I) = Q_{kappa(I)}(I).
template <Scalar T>
class MarkovPartition {
 public:
  MarkovPartition(int n, int N, std::vector<int> kappa, std::vector<T> q, const Tolerances& tol = {})
      : n_(n), N_(N), kappa_(std::move(kappa)), q_(std::move(q)) {
    auto fail = [](const std::string& msg) { throw GeometryError(ErrorKind::InvalidPartition, msg); };
    if (n < 1 || N < n) fail("need 1 <= n <= N, got n=" + std::to_string(n) + " N=" + std::to_string(N));
    if (static_cast<int>(kappa_.size()) != N + 1 || static_cast<int>(q_.size()) != N + 1) {
      fail("kappa and q must have N+1 = " + std::to_string(N + 1) + " entries");
    }
    std::vector<T> block(static_cast<std::size_t>(n + 1), T(0));
    for (std::size_t I = 0; I < kappa_.size(); ++I) {
      if (kappa_[I] < 1 || kappa_[I] > n + 1) fail("kappa(" + std::to_string(I + 1) + ") outside 1..n+1");
      if (!(q_[I] > 0)) fail("q(" + std::to_string(I + 1) + ") is not positive");
      block[static_cast<std::size_t>(kappa_[I] - 1)] += q_[I];
    }
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (block[i] == 0) fail("Q_" + std::to_string(i + 1) + " has empty support");
      if (!negligible(T(block[i] - 1), tol.construction)) fail("Q_" + std::to_string(i + 1) + " does not sum to 1");
    }
  }

  static MarkovPartition identity(int n) {
    std::vector<int> kappa(static_cast<std::size_t>(n + 1));
    for (int i = 0; i <= n; ++i) kappa[static_cast<std::size_t>(i)] = i + 1;
    return MarkovPartition(n, n, std::move(kappa), std::vector<T>(static_cast<std::size_t>(n + 1), T(1)));
  }

  /// The coordinate relabeling x -> (x(pi(1)), ..., x(pi(n+1))), a Markov
  /// embedding with N = n.
  static MarkovPartition relabeling(const Permutation& pi) {
    const int n = pi.size() - 1;
    return MarkovPartition(n, n, pi.images(), std::vector<T>(static_cast<std::size_t>(n + 1), T(1)));
  }

  int n() const { return n_; }
  int N() const { return N_; }
  int kappa(int I) const {
    detail::check_index(I, N_ + 1, "partition");
    return kappa_[static_cast<std::size_t>(I - 1)];
  }
  const T& q(int I) const {
    detail::check_index(I, N_ + 1, "partition");
    return q_[static_cast<std::size_t>(I - 1)];
  }
  const std::vector<int>& kappa_map() const { return kappa_; }
  const std::vector<T>& weights() const { return q_; }

  /// Q_i(I).
  T measure(int i, int I) const { return kappa(I) == i ? q(I) : T(0); }

 private:
  int n_;
  int N_;
  std::vector<int> kappa_;
  std::vector<T> q_;
};

/// Q_i = a_i delta_{sigma(i)} + (1 - a_i) delta_{sigma(n+2)}, i = 1..n+1.
template <Scalar T>
class MarkovPatch {
 public:
  MarkovPatch(int n, Permutation sigma, std::vector<T> a, const Tolerances& tol = {})
      : n_(n), sigma_(std::move(sigma)), a_(std::move(a)) {
    auto fail = [](const std::string& msg) { throw GeometryError(ErrorKind::InvalidPatch, msg); };
    if (n < 1) fail("n must be >= 1");
    if (sigma_.size() != n + 2) fail("sigma must permute 1..n+2 = 1.." + std::to_string(n + 2));
    if (static_cast<int>(a_.size()) != n + 1) fail("a must have n+1 = " + std::to_string(n + 1) + " entries");
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (!(a_[i] > 0) || !(a_[i] < 1)) fail("a_" + std::to_string(i + 1) + " is not in (0,1)");
    }
    auto [lo, hi] = std::minmax_element(a_.begin(), a_.end());
    scalar_ = negligible(T(*hi - *lo), tol.construction);
  }

  int n() const { return n_; }
  const Permutation& sigma() const { return sigma_; }
  const T& a(int i) const {
    detail::check_index(i, n_ + 1, "patch");
    return a_[static_cast<std::size_t>(i - 1)];
  }
  const std::vector<T>& coefficients() const { return a_; }

  /// All a_i equal (up to the construction tolerance; exactly in rational mode).
  bool is_scalar() const { return scalar_; }

  /// Q_i(I).
  T measure(int i, int I) const {
    T v(0);
    if (sigma_(i) == I) v += a(i);
    if (sigma_(n_ + 2) == I) v += T(1 - a(i));
    return v;
  }

 private:
  int n_;
  Permutation sigma_;
  std::vector<T> a_;
  bool scalar_ = false;
};

template <Scalar T>
bool is_scalar(const MarkovPatch<T>& patch) {
  return patch.is_scalar();
}

struct IdentityStage {
  int n;
};
template <Scalar T>
struct PartitionStage {
  MarkovPartition<T> partition;
};
template <Scalar T>
struct PatchStage {
  MarkovPatch<T> patch;
};
template <Scalar T>
struct ScalarPatchStage {
  int n;
  T alpha;
  Permutation sigma;
};

/// Where a map came from. A composite carries its stages in application order.
template <Scalar T>
using Stage = std::variant<IdentityStage, PartitionStage<T>, PatchStage<T>, ScalarPatchStage<T>>;

/// A column-stochastic linear map P_{n_dom} -> P_{n_cod}. The same matrix acts
/// on points (apply) and on ambient tangent components (differential).
template <Scalar T>
class EmbeddingMap {
 public:
  EmbeddingMap(DenseMatrix<T> matrix, std::vector<Stage<T>> provenance, const Tolerances& tol = {})
      : matrix_(std::move(matrix)), provenance_(std::move(provenance)) {
    if (matrix_.rows() < 2 || matrix_.cols() < 2) {
      throw GeometryError(ErrorKind::DimensionMismatch, "embedding matrix " + matrix_.shape() + " is too small");
    }
    for (int c = 0; c < matrix_.cols(); ++c) {
      T s(0);
      for (int r = 0; r < matrix_.rows(); ++r) {
        if (matrix_.at(r, c) < 0) throw GeometryError(ErrorKind::OutOfRange, "negative embedding entry");
        s += matrix_.at(r, c);
      }
      if (!negligible(T(s - 1), tol.construction)) {
        throw GeometryError(ErrorKind::NotNormalized, "column " + std::to_string(c + 1) + " does not sum to 1");
      }
    }
  }

  int n_dom() const { return matrix_.cols() - 1; }
  int n_cod() const { return matrix_.rows() - 1; }
  const DenseMatrix<T>& matrix() const { return matrix_; }
  const std::vector<Stage<T>>& provenance() const { return provenance_; }

  /// True when every stage is an identity or a scalar patch.
  bool is_scalar_patch_chain() const {
    return std::all_of(provenance_.begin(), provenance_.end(), [](const Stage<T>& s) {
      if (std::holds_alternative<IdentityStage>(s) || std::holds_alternative<ScalarPatchStage<T>>(s)) return true;
      if (auto* p = std::get_if<PatchStage<T>>(&s)) return p->patch.is_scalar();
      return false;
    });
  }

 private:
  DenseMatrix<T> matrix_;
  std::vector<Stage<T>> provenance_;
};

template <Scalar T>
EmbeddingMap<T> identity_embedding(int n) {
  if (n < 1) throw GeometryError(ErrorKind::OutOfRange, "simplex dimension must be >= 1");
  DenseMatrix<T> m(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) m.at(i, i) = T(1);
  return EmbeddingMap<T>(std::move(m), {IdentityStage{n}});
}

/// F(p) = sum_i p(i) Q_i.
template <Scalar T>
EmbeddingMap<T> markov_embedding(const MarkovPartition<T>& part) {
  DenseMatrix<T> m(part.N() + 1, part.n() + 1);
  for (int I = 1; I <= part.N() + 1; ++I) m.at(I - 1, part.kappa(I) - 1) = part.q(I);
  return EmbeddingMap<T>(std::move(m), {PartitionStage<T>{part}});
}

/// G(p) = sum_i p(i) (a_i delta_{sigma(i)} + (1 - a_i) delta_{sigma(n+2)}).
template <Scalar T>
EmbeddingMap<T> patched_embedding(const MarkovPatch<T>& patch) {
  const int n = patch.n();
  DenseMatrix<T> m(n + 2, n + 1);
  const int sink = patch.sigma()(n + 2);
  for (int i = 1; i <= n + 1; ++i) {
    m.at(patch.sigma()(i) - 1, i - 1) = patch.a(i);
    m.at(sink - 1, i - 1) = T(1 - patch.a(i));
  }
  return EmbeddingMap<T>(std::move(m), {PatchStage<T>{patch}});
}

/// G_n^{alpha,sigma}(p) = alpha sum_i p(i) delta_{sigma(i)} + (1 - alpha) delta_{sigma(n+2)}.
template <Scalar T>
EmbeddingMap<T> scalar_patched(int n, const T& alpha, const Permutation& sigma) {
  if (!(alpha > 0) || !(alpha < 1)) {
    throw GeometryError(ErrorKind::OutOfRange, "alpha = " + std::to_string(to_double(alpha)) + " is not in (0,1)");
  }
  if (n < 1 || sigma.size() != n + 2) {
    throw GeometryError(ErrorKind::DimensionMismatch, "scalar patch on P_" + std::to_string(n) + " needs a permutation of 1.." +
                                                          std::to_string(n + 2));
  }
  DenseMatrix<T> m(n + 2, n + 1);
  const int sink = sigma(n + 2);
  for (int i = 1; i <= n + 1; ++i) {
    m.at(sigma(i) - 1, i - 1) = alpha;
    m.at(sink - 1, i - 1) = T(1 - alpha);
  }
  return EmbeddingMap<T>(std::move(m), {ScalarPatchStage<T>{n, alpha, sigma}});
}

template <Scalar T>
EmbeddingMap<T> scalar_patched(int n, const T& alpha) {
  return scalar_patched<T>(n, alpha, Permutation::identity(n + 2));
}

namespace detail {

template <Scalar T>
std::vector<T> mat_vec(const DenseMatrix<T>& m, std::span<const T> v) {
  std::vector<T> out(static_cast<std::size_t>(m.rows()), T(0));
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      const T& e = m.at(r, c);
      if (e != 0) out[static_cast<std::size_t>(r)] += e * v[static_cast<std::size_t>(c)];
    }
  }
  return out;
}

inline void require_dim(int expected, int got, const char* what) {
  if (expected != got) {
    throw GeometryError(ErrorKind::DimensionMismatch, std::string(what) + " lives on P_" + std::to_string(got) +
                                                          ", map expects P_" + std::to_string(expected));
  }
}

}  // namespace detail

template <Scalar T>
SimplexPoint<T> apply(const EmbeddingMap<T>& f, const SimplexPoint<T>& p) {
  detail::require_dim(f.n_dom(), p.n(), "point");
  std::vector<T> w = detail::mat_vec(f.matrix(), p.weights());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0)) {
      throw GeometryError(ErrorKind::NonPositiveWeight, "image has zero weight at " + std::to_string(i + 1));
    }
  }
  return SimplexPoint<T>(Unchecked{}, std::move(w));
}

template <Scalar T>
TangentVector<T> differential(const EmbeddingMap<T>& f, const TangentVector<T>& X) {
  detail::require_dim(f.n_dom(), X.n(), "tangent");
  return TangentVector<T>(Unchecked{}, detail::mat_vec(f.matrix(), X.components()));
}

/// f o g. Identity stages are dropped from the combined provenance.
template <Scalar T>
EmbeddingMap<T> compose(const EmbeddingMap<T>& f, const EmbeddingMap<T>& g) {
  if (f.n_dom() != g.n_cod()) {
    throw GeometryError(ErrorKind::DimensionMismatch, "cannot compose P_" + std::to_string(g.n_dom()) + " -> P_" +
                                                          std::to_string(g.n_cod()) + " with a map from P_" +
                                                          std::to_string(f.n_dom()));
  }
  std::vector<Stage<T>> stages;
  for (const auto* src : {&g.provenance(), &f.provenance()}) {
    for (const auto& s : *src) {
      if (!std::holds_alternative<IdentityStage>(s)) stages.push_back(s);
    }
  }
  if (stages.empty()) stages.push_back(IdentityStage{g.n_dom()});
  return EmbeddingMap<T>(f.matrix() * g.matrix(), std::move(stages));
}

/// One-line description of a map's provenance, in application order.
template <Scalar T>
std::string describe(const EmbeddingMap<T>& f) {
  auto num = [](const T& v) {
    if constexpr (is_exact_v<T>) return to_string(v);
    else return format_shortest(v);
  };
  auto perm = [](const Permutation& p) {
    std::string s = "[";
    for (std::size_t k = 0; k < p.images().size(); ++k) s += (k ? "," : "") + std::to_string(p.images()[k]);
    return s + "]";
  };
  std::string out;
  for (const auto& stage : f.provenance()) {
    if (!out.empty()) out += " then ";
    std::visit(
        [&](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, IdentityStage>) {
            out += "identity(n=" + std::to_string(s.n) + ")";
          } else if constexpr (std::is_same_v<S, PartitionStage<T>>) {
            out += "partition(n=" + std::to_string(s.partition.n()) + ",N=" + std::to_string(s.partition.N()) +
                   ",kappa=[";
            for (std::size_t k = 0; k < s.partition.kappa_map().size(); ++k) {
              out += (k ? "," : "") + std::to_string(s.partition.kappa_map()[k]);
            }
            out += "])";
          } else if constexpr (std::is_same_v<S, PatchStage<T>>) {
            out += "patch(n=" + std::to_string(s.patch.n()) + ",sigma=" + perm(s.patch.sigma()) + ",a=[";
            for (std::size_t k = 0; k < s.patch.coefficients().size(); ++k) {
              out += (k ? "," : "") + num(s.patch.coefficients()[k]);
            }
            out += "])";
          } else {
            out += "scalar_patch(n=" + std::to_string(s.n) + ",alpha=" + num(s.alpha) + ",sigma=" + perm(s.sigma) + ")";
          }
        },
        stage);
  }
  return out;
}

/// H^{ij}_p together with u = p(i) / (p(i) + p(j)).
template <Scalar T>
struct PairChain {
  EmbeddingMap<T> map;
  T u;
};

/// H^{ijk}_p together with q = (p(i), p(j), p(k)) / (p(i) + p(j) + p(k)).
template <Scalar T>
struct TripleChain {
  EmbeddingMap<T> map;
  SimplexPoint<T> q;
};

namespace detail {

/// The permutation sending leading[0] -> 1, leading[1] -> 2, ... and the
/// remaining indices, in increasing order, to the following slots.
inline Permutation front_loading(int size, std::initializer_list<int> leading) {
  std::vector<int> im(static_cast<std::size_t>(size), 0);
  int next = 1;
  for (int l : leading) im[static_cast<std::size_t>(l - 1)] = next++;
  for (int l = 1; l <= size; ++l) {
    if (im[static_cast<std::size_t>(l - 1)] == 0) im[static_cast<std::size_t>(l - 1)] = next++;
  }
  return Permutation(std::move(im));
}

/// Scalar-patch chain G_{n-1}^{alpha_{n-1}} o ... o G_start^{alpha_start}
/// carrying the first (start+1) coordinates of the relabeled point onto the
/// rest. The relabeling back to the original coordinates is folded into the
/// last stage's permutation.
template <Scalar T>
EmbeddingMap<T> patch_chain(const std::vector<T>& relabeled, int start, const Permutation& pi) {
  const int n = static_cast<int>(relabeled.size()) - 1;
  // alpha_k = 1 - p'(k+2) / prod_{l>k} alpha_l, from the top down.
  std::vector<T> alpha(static_cast<std::size_t>(n), T(0));
  T tail(1);
  for (int k = n - 1; k >= start; --k) {
    alpha[static_cast<std::size_t>(k)] = T(1) - relabeled[static_cast<std::size_t>(k + 1)] / tail;
    tail *= alpha[static_cast<std::size_t>(k)];
  }
  std::optional<EmbeddingMap<T>> chain;
  for (int k = start; k <= n - 1; ++k) {
    const Permutation sigma = (k == n - 1) ? pi.inverse() : Permutation::identity(k + 2);
    auto stage = scalar_patched<T>(k, alpha[static_cast<std::size_t>(k)], sigma);
    chain = chain ? compose(stage, *chain) : stage;
  }
  return *chain;
}

template <Scalar T>
std::vector<T> relabel(const SimplexPoint<T>& p, const Permutation& pi) {
  std::vector<T> out(p.weights().size());
  for (int l = 1; l <= p.n() + 1; ++l) out[static_cast<std::size_t>(pi(l) - 1)] = p(l);
  return out;
}

template <Scalar T>
EmbeddingMap<T> relabeling_or_identity(const Permutation& pi) {
  if (pi.is_identity()) return identity_embedding<T>(pi.size() - 1);
  return markov_embedding(MarkovPartition<T>::relabeling(pi));
}

inline void check_distinct(std::initializer_list<int> idx, int size) {
  for (int i : idx) check_index(i, size, "chain");
  for (auto a = idx.begin(); a != idx.end(); ++a) {
    for (auto b = a + 1; b != idx.end(); ++b) {
      if (*a == *b) throw GeometryError(ErrorKind::IdenticalIndices, "index " + std::to_string(*a) + " repeated");
    }
  }
}

}  // namespace detail

/// A composition H of scalar patched embeddings P_1 -> P_n with
/// H(p_u) = p and 2 dH(Z_1^1) / (p(i) + p(j)) = Z_i^n - Z_j^n.
/// For n = 1 the map is the identity, or the swap when (i, j) = (2, 1).
template <Scalar T>
PairChain<T> h_ij(const SimplexPoint<T>& p, int i, int j) {
  const int n = p.n();
  detail::check_distinct({i, j}, n + 1);
  T u = p(i) / (p(i) + p(j));
  const Permutation pi = detail::front_loading(n + 1, {i, j});
  if (n == 1) return {detail::relabeling_or_identity<T>(pi), u};
  return {detail::patch_chain<T>(detail::relabel(p, pi), 1, pi), u};
}

/// A composition H of scalar patched embeddings P_2 -> P_n with H(q) = p,
/// dH(Z_1^2 - Z_2^2) / s = Z_i^n - Z_j^n and dH(Z_1^2 - Z_3^2) / s = Z_i^n - Z_k^n,
/// where s = p(i) + p(j) + p(k).
template <Scalar T>
TripleChain<T> h_ijk(const SimplexPoint<T>& p, int i, int j, int k) {
  const int n = p.n();
  if (n < 2) throw GeometryError(ErrorKind::OutOfRange, "h_ijk needs n >= 2");
  detail::check_distinct({i, j, k}, n + 1);
  const T s = p(i) + p(j) + p(k);
  SimplexPoint<T> q(Unchecked{}, {p(i) / s, p(j) / s, p(k) / s});
  const Permutation pi = detail::front_loading(n + 1, {i, j, k});
  if (n == 2) return {detail::relabeling_or_identity<T>(pi), std::move(q)};
  return {detail::patch_chain<T>(detail::relabel(p, pi), 2, pi), std::move(q)};
}

}  // namespace simplexgeo
