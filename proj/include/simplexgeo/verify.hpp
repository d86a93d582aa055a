#pragma once

// Mechanized checks on families {A_n} of tensor fields: invariance under
// scalar patched embeddings, the properties every invariant family shares,
// conditions (C1) and (C2), the reconstruction of lambda and mu, and the
// Fisher-Neyman factorizations behind (patched) Markov embeddings.
//
// Everything that needs only field arithmetic is templated and also runs in
// exact rational arithmetic; (C1), (C2), M(u) and the reconstructions use
// square roots or sampled grids of doubles and are double-only.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "simplexgeo/embeddings.hpp"
#include "simplexgeo/random.hpp"
#include "simplexgeo/report.hpp"
#include "simplexgeo/tensor_fields.hpp"

namespace simplexgeo {

/// An indexed family n -> A_n, n = 1..max_n.
template <Scalar T>
struct FamilyOracle {
  int max_n = 0;
  std::function<TensorField<T>(int)> at;
  std::string label;
};

template <Scalar T>
FamilyOracle<T> lm_family(const T& lambda, const T& mu, int max_n) {
  return {max_n, [lambda, mu](int n) { return tensor_lm<T>(n, lambda, mu); }, tensor_lm<T>(1, lambda, mu).label()};
}

template <Scalar T>
FamilyOracle<T> d_family(const T& scale, int max_n) {
  return {max_n, [scale](int n) { return scaled<T>(tensor_d<T>(n), scale); }, detail::scalar_label(scale) + "*d"};
}

template <Scalar T>
FamilyOracle<T> s_family(const T& scale, int max_n) {
  return {max_n, [scale](int n) { return scaled<T>(tensor_s<T>(n), scale); }, detail::scalar_label(scale) + "*s"};
}

template <Scalar T>
FamilyOracle<T> fisher_family(int max_n) {
  return {max_n, [](int n) { return fisher<T>(n); }, "fisher"};
}

template <Scalar T>
FamilyOracle<T> zero_family(int max_n) {
  return {max_n, [](int n) { return zero_tensor<T>(n); }, "zero"};
}

/// Sampling grids for (C1), (C2) and the profile checks.
struct ConditionGrid {
  std::vector<double> u;
  std::vector<double> alpha;
  std::vector<Permutation> sigmas;

  /// u = k/24 (k = 1..23), alpha = 0.1..0.9, all of S_3.
  static ConditionGrid standard();
};

/// psi_u^sigma(alpha) = G_1^{alpha,sigma}(p_u) in P_2.
struct PsiPoint {
  double u;
  double alpha;
  Permutation sigma;
  SimplexPoint<double> q;
};

PsiPoint make_psi_point(double u, double alpha, const Permutation& sigma);

/// u_alpha^{ij} = q(sigma(i)) / (q(sigma(i)) + q(sigma(j))).
double u_alpha(const PsiPoint& psi, int i, int j);

/// Magnitude below which A_1(Z, Z) counts as degenerate and a (C1)
/// numerator/denominator counts as zero.
inline constexpr double kDegenerateMagnitude = 1e-12;
/// Relative tolerance for the sampled (C1) ratio table.
inline constexpr double kC1Tolerance = 1e-8;

// ---------------------------------------------------------------------------
// Invariance under scalar patched embeddings.

namespace detail {

template <Scalar T>
std::string permutation_label(const Permutation& p) {
  std::string s = "[";
  for (std::size_t k = 0; k < p.images().size(); ++k) s += (k ? "," : "") + std::to_string(p.images()[k]);
  return s + "]";
}

template <Scalar T>
Witness make_witness(const SimplexPoint<T>& p, std::initializer_list<const TangentVector<T>*> tangents,
                     std::initializer_list<T> values, std::string description) {
  Witness w;
  w.point = to_doubles<T>(p.weights());
  for (const auto* t : tangents) w.tangents.push_back(to_doubles<T>(t->components()));
  for (const T& v : values) w.values.push_back(to_double(v));
  w.description = std::move(description);
  return w;
}

template <Scalar T>
std::vector<TensorField<T>> materialize(const FamilyOracle<T>& family) {
  std::vector<TensorField<T>> out;
  for (int n = 1; n <= family.max_n; ++n) out.push_back(family.at(n));
  return out;
}

}  // namespace detail

/// Samples n < max_n, scalar patches G_n^{alpha,sigma}, points and tangents and
/// reports the largest relative deviation between A_n and the pullback of A_{n+1}.
template <Scalar T>
CheckReport check_family_invariance(const FamilyOracle<T>& family, int trials, double tol, Rng& rng) {
  if (family.max_n < 2) throw GeometryError(ErrorKind::OutOfRange, "invariance needs max_n >= 2");
  const auto fields = detail::materialize(family);
  DeviationTracker tracker("family_invariance[" + family.label + "]", tol);
  for (int t = 0; t < trials; ++t) {
    const int n = uniform_int(rng, 1, family.max_n - 1);
    const T alpha = random_scalar<T>(rng, 0.01, 0.99);
    const Permutation sigma = random_permutation(n + 2, rng);
    const auto G = scalar_patched<T>(n, alpha, sigma);
    const auto p = random_point<T>(n, rng);
    const auto X = random_tangent<T>(n, rng);
    const auto Y = random_tangent<T>(n, rng);
    const T base = fields[static_cast<std::size_t>(n - 1)](p, X, Y);
    const T pulled = fields[static_cast<std::size_t>(n)](simplexgeo::apply(G, p), differential(G, X), differential(G, Y));
    tracker.record(to_double(relative_deviation(base, pulled)), [&] {
      return detail::make_witness<T>(p, {&X, &Y}, {base, pulled},
                                     "n=" + std::to_string(n) + " alpha=" + detail::scalar_label(alpha) +
                                         " sigma=" + detail::permutation_label<T>(sigma));
    });
  }
  return tracker.finish();
}

/// Looks for a sample where the pullback of A_{n+1}^{lambda,mu} along a
/// (non-scalar) patched embedding differs from A_n^{lambda,mu} by more than
/// `threshold` (relative). Tries a fixed grid (b_n and points weighted towards
/// each coordinate, with X = Y = Z_i - Z_j) and then up to `random_budget`
/// random samples. Finding a witness fails the report; finding none is
/// `inconclusive`, never a proof of invariance.
template <Scalar T>
CheckReport search_patch_noninvariance(const MarkovPatch<T>& patch, const T& lambda, const T& mu, Rng& rng,
                                       int random_budget = 10000, double threshold = 1e-6) {
  const int n = patch.n();
  const auto G = patched_embedding(patch);
  const auto lower = tensor_lm<T>(n, lambda, mu);
  const auto upper = tensor_lm<T>(n + 1, lambda, mu);
  DeviationTracker tracker("patch_invariance[" + lower.label() + "]", threshold);
  auto probe = [&](const SimplexPoint<T>& p, const TangentVector<T>& X, const char* where) {
    const T base = lower(p, X, X);
    const T pulled = upper(simplexgeo::apply(G, p), differential(G, X), differential(G, X));
    tracker.record(to_double(relative_deviation(base, pulled)),
                   [&] { return detail::make_witness<T>(p, {&X}, {base, pulled}, where); });
    return tracker.max_deviation() > threshold;
  };

  std::vector<SimplexPoint<T>> points{barycenter<T>(n)};
  for (int i = 1; i <= n + 1; ++i) {
    std::vector<T> w(static_cast<std::size_t>(n + 1), ratio<T>(1, 2 * n));
    w[static_cast<std::size_t>(i - 1)] = ratio<T>(1, 2);
    points.push_back(make_point<T>(n, std::move(w)));
  }
  bool found = false;
  for (const auto& p : points) {
    for (int i = 1; i <= n + 1 && !found; ++i) {
      for (int j = i + 1; j <= n + 1 && !found; ++j) {
        found = probe(p, z_basis<T>(n, i) - z_basis<T>(n, j), "grid");
      }
    }
    if (found) break;
  }
  for (int k = 0; k < random_budget && !found; ++k) {
    found = probe(random_point<T>(n, rng), random_tangent<T>(n, rng), "random");
  }
  CheckReport report = tracker.finish();
  if (!found) {
    report.status = CheckStatus::inconclusive;
    report.notes.push_back("no witness found on the grid or in " + std::to_string(random_budget) + " random samples");
  }
  return report;
}

// ---------------------------------------------------------------------------
// Properties shared by invariant families.

/// A_1(Z_u, Z_u) against A_1(Z_{1-u}, Z_{1-u}) over the grid.
CheckReport check_sym_u(const TensorField<double>& a1, std::span<const double> grid, double tol);

template <Scalar T>
struct BarycenterResult {
  T value;
  CheckReport report;
};

/// At b_m, A_m(Z_i, Z_i) / (m(m+1)) and -A_m(Z_i, Z_j) / (m+1) for all i != j and
/// all m = 1..max_n. Returns the quantity at m = n; the report measures the
/// spread of all of them around it.
template <Scalar T>
BarycenterResult<T> barycenter_quantity(const FamilyOracle<T>& family, int n, double tol) {
  if (n < 1 || n > family.max_n) throw GeometryError(ErrorKind::OutOfRange, "n outside 1..max_n");
  struct Sample {
    int m, i, j;
    T value;
  };
  std::vector<Sample> samples;
  std::optional<T> value;
  for (int m = 1; m <= family.max_n; ++m) {
    const auto A = family.at(m);
    const auto b = barycenter<T>(m);
    for (int i = 1; i <= m + 1; ++i) {
      const auto Zi = z_basis<T>(m, i);
      for (int j = 1; j <= m + 1; ++j) {
        const auto Zj = z_basis<T>(m, j);
        T v = (i == j) ? T(A(b, Zi, Zi) / T(m * (m + 1))) : T(-A(b, Zi, Zj) / T(m + 1));
        if (m == n && !value) value = v;
        samples.push_back({m, i, j, v});
      }
    }
  }
  DeviationTracker tracker("barycenter_quantity[" + family.label + "]", tol);
  for (const auto& s : samples) {
    tracker.record(to_double(relative_deviation(s.value, *value)), [&] {
      return Witness{to_doubles<T>(barycenter<T>(s.m).weights()),
                     {},
                     {to_double(s.value), to_double(*value)},
                     "m=" + std::to_string(s.m) + " i=" + std::to_string(s.i) + " j=" + std::to_string(s.j)};
    });
  }
  return {*value, tracker.finish()};
}

// ---------------------------------------------------------------------------
// Conditions (C1) and (C2). Double-only.

struct C1Result {
  /// (t, r(t)) with t = u / (1 - u), one row per usable u in grid order.
  std::vector<std::pair<double, double>> r_table;
  CheckReport report;
};

/// For every (u, alpha, sigma) of the grid, the ratio
/// A_2(W_{s3}, W_{s1}) / A_2(W_{s3}, W_{s2}) at psi_u^sigma(alpha), with
/// W_{s3} = Z_{s1} - Z_{s2}, W_{s1} = Z_{s3} - Z_{s2}, W_{s2} = Z_{s1} - Z_{s3}
/// (s = sigma). Checks that it depends on u only, is positive, and that
/// r(t) r(1/t) = 1 on mirrored grid points.
///
/// A_1 must be nondegenerate on the u-grid; otherwise the report is a
/// precondition failure. The exception is A_1 vanishing on the whole grid
/// together with every ratio term, where (C1) holds for any r. Grid points
/// where numerator and denominator both vanish are excluded and noted; a
/// vanishing denominator with a nonzero numerator is an infinite ratio and
/// fails the report.
C1Result check_C1(const TensorField<double>& a2, const TensorField<double>& a1, const ConditionGrid& grid,
                  double tol = kC1Tolerance);

/// (a) A_1(Z_u, Z_u) >= -tol on the u-grid, (b) |A_1(Z, Z)| <= tol at b_1,
/// (c) A_2(dH^{s(i)s(j)}(Z), dH^{s(k)s(l)}(Z)) = M(u^{ij}) M(u^{kl}) at
/// psi_u^sigma(alpha) for all ordered pairs of distinct indices, with
/// M(u) = sgn(2u - 1) sqrt(A_1(Z_u, Z_u)). Clause (c) is compared relative to
/// max(|lhs|, |rhs|, max_u |A_1(Z_u, Z_u)|). Failed clauses are named in the notes.
CheckReport check_C2(const FamilyOracle<double>& family, const ConditionGrid& grid, double tol);

/// sgn(2u - 1) sqrt(A_1(Z_u, Z_u)), with sgn(0) = 0. Throws NegativeValue when
/// A_1(Z_u, Z_u) < -tol.
double M_profile(const TensorField<double>& a1, double u, double tol = 1e-12);

struct Reconstruction {
  double value = 0;
  CheckReport report;
  std::vector<CheckReport> prerequisites;
};

struct ReconstructionOptions {
  double tol = 1e-9;
  int invariance_trials = 1000;
  int samples_per_n = 500;
  ConditionGrid grid = ConditionGrid::standard();
};

/// lambda = A_1(Z_{1/2}, Z_{1/2}) / 2, then certifies A_n = lambda A_n^d on
/// random samples for every n. Throws PrereqFailed unless the family passes
/// the invariance check and (C1).
Reconstruction reconstruct_lambda(const FamilyOracle<double>& family, Rng& rng, const ReconstructionOptions& options = {});

/// mu = (16/9) M(1/3)^2, then certifies A_n = mu A_n^s on random samples and
/// M(u) = (sqrt(mu)/2)(1/(1-u) - 1/u) on the u-grid. Throws PrereqFailed
/// unless the family passes the invariance check and (C2).
Reconstruction reconstruct_mu(const FamilyOracle<double>& family, Rng& rng, const ReconstructionOptions& options = {});

// ---------------------------------------------------------------------------
// Fisher-Neyman factorizations.

/// Checks F(rho)(I) = s(kappa(I), rho) t(I) with s(i, rho) = rho(i) for random rho.
template <Scalar T>
CheckReport check_markov_factorization(const MarkovPartition<T>& part, std::span<const T> t, int samples, Rng& rng,
                                       double tol = 1e-12) {
  if (static_cast<int>(t.size()) != part.N() + 1) {
    throw GeometryError(ErrorKind::DimensionMismatch, "statistic t needs N+1 entries");
  }
  const auto F = markov_embedding(part);
  DeviationTracker tracker("markov_factorization", is_exact_v<T> ? 0.0 : tol);
  for (int s = 0; s < samples; ++s) {
    const auto rho = random_point<T>(part.n(), rng);
    const auto image = simplexgeo::apply(F, rho);
    for (int I = 1; I <= part.N() + 1; ++I) {
      const T lhs = image(I);
      const T rhs = rho(part.kappa(I)) * t[static_cast<std::size_t>(I - 1)];
      tracker.record(to_double(relative_deviation(lhs, rhs)),
                     [&] { return detail::make_witness<T>(rho, {}, {lhs, rhs}, "I=" + std::to_string(I)); });
    }
  }
  return tracker.finish();
}

/// The canonical statistic t(I) = sum_i Q_i(I) = q(I).
template <Scalar T>
CheckReport factorization_check_markov(const MarkovPartition<T>& part, int samples, Rng& rng, double tol = 1e-12) {
  return check_markov_factorization<T>(part, part.weights(), samples, rng, tol);
}

/// Statistic for a patched embedding: t(sigma(i)) = a_i, t(sigma(n+2)) = (1 - c) / b.
template <Scalar T>
std::vector<T> patched_statistic(const MarkovPatch<T>& patch, const T& b, const T& c) {
  const int n = patch.n();
  std::vector<T> t(static_cast<std::size_t>(n + 2));
  for (int i = 1; i <= n + 1; ++i) t[static_cast<std::size_t>(patch.sigma()(i) - 1)] = patch.a(i);
  t[static_cast<std::size_t>(patch.sigma()(n + 2) - 1)] = (T(1) - c) / b;
  return t;
}

namespace detail {

struct PatchConstraintLayout {
  std::vector<int> free;  // indices != j
  int lo = 0, hi = 0;     // argmin / argmax of a over `free`
  bool degenerate = false;
};

template <Scalar T>
PatchConstraintLayout patch_layout(const MarkovPatch<T>& patch, int j, double tol) {
  PatchConstraintLayout L;
  for (int i = 1; i <= patch.n() + 1; ++i) {
    if (i == j) continue;
    L.free.push_back(i);
    if (L.lo == 0 || patch.a(i) < patch.a(L.lo)) L.lo = i;
    if (L.hi == 0 || patch.a(i) > patch.a(L.hi)) L.hi = i;
  }
  L.degenerate = negligible(T(patch.a(L.hi) - patch.a(L.lo)), tol);
  return L;
}

/// Draws a point of {p : p(j) = b, sum_i a_i p(i) = c}, or nothing when the
/// candidate leaves the open simplex.
template <Scalar T>
std::optional<SimplexPoint<T>> draw_constrained(const MarkovPatch<T>& patch, const PatchConstraintLayout& L, int j,
                                                const T& b, const T& c, Rng& rng) {
  const int n = patch.n();
  std::vector<T> r(static_cast<std::size_t>(n + 2), T(0));  // 1-based shares of the free mass
  if (L.free.size() == 1) {
    r[static_cast<std::size_t>(L.free[0])] = T(1);
  } else if (L.degenerate) {
    const auto share = random_point<T>(static_cast<int>(L.free.size()) - 1, rng);
    for (std::size_t k = 0; k < L.free.size(); ++k) r[static_cast<std::size_t>(L.free[k])] = share.weights()[k];
  } else {
    // Free coordinates other than lo/hi get random shares; lo and hi then
    // solve the two linear constraints.
    const T target = (c - patch.a(j) * b) / (T(1) - b);
    std::vector<int> others;
    for (int i : L.free) {
      if (i != L.lo && i != L.hi) others.push_back(i);
    }
    T slack(1), weighted(0);
    if (!others.empty()) {
      const auto share = random_point<T>(static_cast<int>(others.size()), rng);
      const T shrink = random_scalar<T>(rng, 0.0, 1.0);
      for (std::size_t k = 0; k < others.size(); ++k) {
        const T v = shrink * share.weights()[k];
        r[static_cast<std::size_t>(others[k])] = v;
        slack -= v;
        weighted += patch.a(others[k]) * v;
      }
    }
    const T rest = target - weighted;
    const T r_hi = (rest - patch.a(L.lo) * slack) / (patch.a(L.hi) - patch.a(L.lo));
    r[static_cast<std::size_t>(L.hi)] = r_hi;
    r[static_cast<std::size_t>(L.lo)] = slack - r_hi;
  }
  std::vector<T> w(static_cast<std::size_t>(n + 1));
  for (int i = 1; i <= n + 1; ++i) {
    w[static_cast<std::size_t>(i - 1)] = (i == j) ? b : T((T(1) - b) * r[static_cast<std::size_t>(i)]);
    if (!(w[static_cast<std::size_t>(i - 1)] > 0)) return std::nullopt;
  }
  return SimplexPoint<T>(Unchecked{}, std::move(w));
}

}  // namespace detail

/// Checks G(p)(w) = p(kappa(w)) t(w) on sampled points of
/// P' = {p : p(j) = b, sum_i a_i p(i) = c}, with kappa(sigma(i)) = i and
/// kappa(sigma(n+2)) = j. Throws EmptySample when `attempt_budget` draws
/// produce no interior point.
template <Scalar T>
CheckReport check_patched_factorization(const MarkovPatch<T>& patch, int j, const T& b, const T& c,
                                        std::span<const T> t, int samples, Rng& rng, double tol = 1e-12,
                                        int attempt_budget = 0) {
  const int n = patch.n();
  detail::check_index(j, n + 1, "factorization");
  if (static_cast<int>(t.size()) != n + 2) throw GeometryError(ErrorKind::DimensionMismatch, "statistic t needs n+2 entries");
  if (attempt_budget <= 0) attempt_budget = 1000 * std::max(samples, 1);
  const auto L = detail::patch_layout(patch, j, 1e-12);
  const auto G = patched_embedding(patch);
  std::vector<int> kappa(static_cast<std::size_t>(n + 2));
  for (int i = 1; i <= n + 1; ++i) kappa[static_cast<std::size_t>(patch.sigma()(i) - 1)] = i;
  kappa[static_cast<std::size_t>(patch.sigma()(n + 2) - 1)] = j;

  DeviationTracker tracker("patched_factorization", is_exact_v<T> ? 0.0 : tol);
  int accepted = 0;
  for (int attempt = 0; attempt < attempt_budget && accepted < samples; ++attempt) {
    auto p = detail::draw_constrained(patch, L, j, b, c, rng);
    if (!p) continue;
    ++accepted;
    const auto image = simplexgeo::apply(G, *p);
    for (int w = 1; w <= n + 2; ++w) {
      const T lhs = image(w);
      const T rhs = (*p)(kappa[static_cast<std::size_t>(w - 1)]) * t[static_cast<std::size_t>(w - 1)];
      tracker.record(to_double(relative_deviation(lhs, rhs)),
                     [&] { return detail::make_witness<T>(*p, {}, {lhs, rhs}, "omega=" + std::to_string(w)); });
    }
  }
  if (accepted == 0) {
    throw GeometryError(ErrorKind::EmptySample, "no interior point satisfied the constraints in " +
                                                    std::to_string(attempt_budget) + " attempts");
  }
  auto report = tracker.finish();
  if (accepted < samples) report.notes.push_back("only " + std::to_string(accepted) + " samples accepted");
  return report;
}

/// Validates c against the admissible interval
/// (b a_j + (1-b) a_min, b a_j + (1-b) a_max), or c = b a_j + (1-b) a_min when
/// a_min = a_max (extremes over i != j), then runs the check with the
/// canonical statistic.
template <Scalar T>
CheckReport factorization_check_patched(const MarkovPatch<T>& patch, int j, const T& b, const T& c, int samples,
                                        Rng& rng, double tol = 1e-12) {
  detail::check_index(j, patch.n() + 1, "factorization");
  if (!(b > 0) || !(b < 1)) throw GeometryError(ErrorKind::OutOfRange, "b must lie in (0,1)");
  const auto L = detail::patch_layout(patch, j, 1e-12);
  const T lo = b * patch.a(j) + (T(1) - b) * patch.a(L.lo);
  const T hi = b * patch.a(j) + (T(1) - b) * patch.a(L.hi);
  if (L.degenerate) {
    if (!negligible(T(c - lo), 1e-12)) {
      throw GeometryError(ErrorKind::InfeasibleConstraints,
                          "with a_min = a_max, c must equal " + std::to_string(to_double(lo)));
    }
  } else if (!(c > lo) || !(c < hi)) {
    throw GeometryError(ErrorKind::InfeasibleConstraints, "c = " + std::to_string(to_double(c)) + " outside (" +
                                                              std::to_string(to_double(lo)) + ", " +
                                                              std::to_string(to_double(hi)) + ")");
  }
  const auto t = patched_statistic(patch, b, c);
  return check_patched_factorization<T>(patch, j, b, c, t, samples, rng, tol);
}

}  // namespace simplexgeo
