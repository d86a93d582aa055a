#pragma once

// Random Markov partitions and patches.

#include <algorithm>

#include "simplexgeo/embeddings.hpp"
#include "simplexgeo/random.hpp"

namespace simplexgeo {

/// A partition of Omega_{N+1} into n+1 nonempty blocks with random weights.
template <Scalar T>
MarkovPartition<T> random_partition(int n, int N, Rng& rng) {
  if (n < 1 || N < n) throw GeometryError(ErrorKind::OutOfRange, "need 1 <= n <= N");
  // The first n+1 slots of a random arrangement seed one block each.
  const Permutation slots = random_permutation(N + 1, rng);
  std::vector<int> kappa(static_cast<std::size_t>(N + 1));
  for (int k = 1; k <= N + 1; ++k) {
    kappa[static_cast<std::size_t>(slots(k) - 1)] = k <= n + 1 ? k : uniform_int(rng, 1, n + 1);
  }
  std::vector<T> q(static_cast<std::size_t>(N + 1));
  for (int i = 1; i <= n + 1; ++i) {
    std::vector<int> block;
    for (int I = 1; I <= N + 1; ++I) {
      if (kappa[static_cast<std::size_t>(I - 1)] == i) block.push_back(I);
    }
    if (block.size() == 1) {
      q[static_cast<std::size_t>(block[0] - 1)] = T(1);
      continue;
    }
    const auto w = random_point<T>(static_cast<int>(block.size()) - 1, rng);
    for (std::size_t k = 0; k < block.size(); ++k) q[static_cast<std::size_t>(block[k] - 1)] = w.weights()[k];
  }
  return MarkovPartition<T>(n, N, std::move(kappa), std::move(q));
}

/// Coefficients a_i drawn from [lo, hi] with a random sigma. When
/// `non_scalar` is set, redraws until at least two coefficients differ.
template <Scalar T>
MarkovPatch<T> random_patch(int n, Rng& rng, bool non_scalar = false, double lo = 0.05, double hi = 0.95) {
  const Permutation sigma = random_permutation(n + 2, rng);
  std::vector<T> a(static_cast<std::size_t>(n + 1));
  for (;;) {
    for (auto& v : a) v = random_scalar<T>(rng, lo, hi);
    if (!non_scalar || std::any_of(a.begin(), a.end(), [&](const T& v) { return v != a.front(); })) break;
  }
  return MarkovPatch<T>(n, sigma, std::move(a));
}

}  // namespace simplexgeo
