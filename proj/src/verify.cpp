#include "simplexgeo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace simplexgeo {

ConditionGrid ConditionGrid::standard() {
  ConditionGrid g;
  for (int k = 1; k <= 23; ++k) g.u.push_back(k / 24.0);
  for (int k = 1; k <= 9; ++k) g.alpha.push_back(k / 10.0);
  g.sigmas = all_permutations(3);
  return g;
}

PsiPoint make_psi_point(double u, double alpha, const Permutation& sigma) {
  const auto G = scalar_patched<double>(1, alpha, sigma);
  return {u, alpha, sigma, apply(G, point_of_u(u))};
}

double u_alpha(const PsiPoint& psi, int i, int j) {
  const double a = psi.q(psi.sigma(i));
  return a / (a + psi.q(psi.sigma(j)));
}

namespace {

const TangentVector<double>& z_one() {
  static const TangentVector<double> z = z_basis<double>(1, 1);
  return z;
}

double a1_diag(const TensorField<double>& a1, double u) { return a1(point_of_u(u), z_one(), z_one()); }

/// e_a - e_b in T P_2.
TangentVector<double> edge(int a, int b) {
  std::vector<double> x(3, 0.0);
  x[static_cast<std::size_t>(a - 1)] += 1;
  x[static_cast<std::size_t>(b - 1)] -= 1;
  return TangentVector<double>(Unchecked{}, std::move(x));
}

Witness psi_witness(const PsiPoint& psi, std::vector<TangentVector<double>> tangents, std::vector<double> values,
                    std::string extra = {}) {
  Witness w;
  w.point = to_doubles<double>(psi.q.weights());
  for (const auto& t : tangents) w.tangents.push_back(to_doubles<double>(t.components()));
  w.values = std::move(values);
  w.description = "u=" + format_shortest(psi.u) + " alpha=" + format_shortest(psi.alpha) +
                  " sigma=" + detail::permutation_label<double>(psi.sigma) + extra;
  return w;
}

std::string status_text(const CheckReport& r) { return r.name + " " + std::string(to_string(r.status)); }

bool all_passed(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const CheckReport& r) { return r.status == CheckStatus::passed; });
}

void require(const std::vector<CheckReport>& prereqs) {
  if (all_passed(prereqs)) return;
  std::string why;
  for (const auto& r : prereqs) {
    if (r.status != CheckStatus::passed) why += (why.empty() ? "" : "; ") + status_text(r);
  }
  throw GeometryError(ErrorKind::PrereqFailed, why);
}

/// Samples (n, p, X, Y) for every n and compares the family with `model`.
void certify(const FamilyOracle<double>& family, const std::function<TensorField<double>(int)>& model, int samples,
             Rng& rng, DeviationTracker& tracker) {
  for (int n = 1; n <= family.max_n; ++n) {
    const auto A = family.at(n);
    const auto B = model(n);
    for (int s = 0; s < samples; ++s) {
      const auto p = random_point<double>(n, rng);
      const auto X = random_tangent<double>(n, rng);
      const auto Y = random_tangent<double>(n, rng);
      const double a = A(p, X, Y);
      const double b = B(p, X, Y);
      tracker.record(relative_deviation(a, b), [&] {
        return detail::make_witness<double>(p, {&X, &Y}, {a, b}, "n=" + std::to_string(n));
      });
    }
  }
}

}  // namespace

CheckReport check_sym_u(const TensorField<double>& a1, std::span<const double> grid, double tol) {
  DeviationTracker tracker("sym_u[" + a1.label() + "]", tol);
  for (double u : grid) {
    const double lhs = a1_diag(a1, u);
    const double rhs = a1_diag(a1, 1 - u);
    tracker.record(relative_deviation(lhs, rhs), [&] {
      return Witness{{u, 1 - u}, {to_doubles<double>(z_one().components())}, {lhs, rhs}, "u=" + format_shortest(u)};
    });
  }
  return tracker.finish();
}

C1Result check_C1(const TensorField<double>& a2, const TensorField<double>& a1, const ConditionGrid& grid, double tol) {
  DeviationTracker tracker("C1[" + a2.label() + "]", tol);
  C1Result result;

  std::vector<double> degenerate_u;
  for (double u : grid.u) {
    if (std::abs(a1_diag(a1, u)) <= kDegenerateMagnitude) degenerate_u.push_back(u);
  }
  const bool a1_vanishes = degenerate_u.size() == grid.u.size();
  if (!degenerate_u.empty() && !a1_vanishes) {
    std::string list;
    for (double u : degenerate_u) list += (list.empty() ? "" : ",") + format_shortest(u);
    result.report = tracker.precondition_failed("A_1(Z_u,Z_u) is degenerate at u in {" + list + "}");
    return result;
  }

  // ratio[k] holds the reference r for grid.u[k] (first usable (alpha, sigma)).
  std::vector<std::optional<double>> reference(grid.u.size());
  long excluded = 0, infinite = 0;
  for (std::size_t k = 0; k < grid.u.size(); ++k) {
    for (double alpha : grid.alpha) {
      for (const auto& sigma : grid.sigmas) {
        const auto psi = make_psi_point(grid.u[k], alpha, sigma);
        const auto W3 = edge(sigma(1), sigma(2));
        const auto W1 = edge(sigma(3), sigma(2));
        const auto W2 = edge(sigma(1), sigma(3));
        const double num = a2(psi.q, W3, W1);
        const double den = a2(psi.q, W3, W2);
        const bool den_zero = std::abs(den) < kDegenerateMagnitude;
        const bool num_zero = std::abs(num) < kDegenerateMagnitude;
        if (a1_vanishes) {
          if (!den_zero || !num_zero) {
            result.report = tracker.precondition_failed("A_1 vanishes on the u-grid while A_2 does not");
            return result;
          }
          continue;
        }
        if (den_zero) {
          if (num_zero) {
            ++excluded;
          } else {
            // An infinite ratio: no r with values in (0, inf) fits this point.
            ++infinite;
            tracker.record(std::numeric_limits<double>::infinity(),
                           [&] { return psi_witness(psi, {W3, W1, W2}, {num, den}); });
          }
          continue;
        }
        const double r = num / den;
        if (!reference[k]) reference[k] = r;
        const double dev = r > 0 ? relative_deviation(r, *reference[k]) : std::numeric_limits<double>::infinity();
        tracker.record(dev, [&] { return psi_witness(psi, {W3, W1, W2}, {num, den, r, *reference[k]}); });
      }
    }
  }
  if (a1_vanishes) {
    tracker.note("A_1 and all ratio terms vanish on the grid; (C1) holds for any r");
    result.report = tracker.finish();
    return result;
  }
  if (excluded > 0) tracker.note(std::to_string(excluded) + " grid points excluded (0/0 ratio)");
  if (infinite > 0) {
    tracker.note("degenerate denominator: A_2(W_3,W_2) vanishes with a nonzero numerator at " + std::to_string(infinite) +
                 " grid points");
  }

  // r(t) r(1/t) = 1 on mirrored u-grid points.
  for (std::size_t k = 0; k < grid.u.size(); ++k) {
    const double u = grid.u[k];
    if (!reference[k]) continue;
    result.r_table.emplace_back(u / (1 - u), *reference[k]);
    auto mirror = std::find_if(grid.u.begin(), grid.u.end(), [&](double v) { return std::abs(v - (1 - u)) < 1e-15; });
    if (mirror == grid.u.end()) continue;
    const auto& other = reference[static_cast<std::size_t>(mirror - grid.u.begin())];
    if (!other) continue;
    const double product = *reference[k] * *other;
    tracker.record(std::abs(product - 1), [&] {
      return Witness{{u, 1 - u}, {}, {*reference[k], *other, product}, "r(t) r(1/t) at u=" + format_shortest(u)};
    });
  }
  result.report = tracker.finish();
  return result;
}

double M_profile(const TensorField<double>& a1, double u, double tol) {
  const double v = a1_diag(a1, u);
  if (v < -tol) {
    throw GeometryError(ErrorKind::NegativeValue, "A_1(Z_u,Z_u) = " + format_shortest(v) + " < 0 at u=" + format_shortest(u));
  }
  const double s = 2 * u - 1;
  const double sign = s > 0 ? 1.0 : (s < 0 ? -1.0 : 0.0);
  return sign * std::sqrt(std::max(v, 0.0));
}

CheckReport check_C2(const FamilyOracle<double>& family, const ConditionGrid& grid, double tol) {
  if (family.max_n < 2) throw GeometryError(ErrorKind::OutOfRange, "C2 needs max_n >= 2");
  const auto a1 = family.at(1);
  const auto a2 = family.at(2);
  DeviationTracker tracker("C2[" + family.label + "]", tol);

  // (a) positive semidefinite on the u-grid.
  double worst_a = 0, scale = 0;
  for (double u : grid.u) {
    const double v = a1_diag(a1, u);
    scale = std::max(scale, std::abs(v));
    const double dev = std::max(0.0, -v);
    worst_a = std::max(worst_a, dev);
    tracker.record(dev, [&] { return Witness{{u, 1 - u}, {}, {v}, "clause (a) at u=" + format_shortest(u)}; });
  }
  // (b) degenerate at b_1.
  const double at_b1 = a1(barycenter<double>(1), z_one(), z_one());
  tracker.record(std::abs(at_b1), [&] { return Witness{{0.5, 0.5}, {}, {at_b1}, "clause (b) at b_1"}; });
  if (worst_a > tol) tracker.note("clause (a) failed: A_1(Z_u,Z_u) negative on the u-grid");
  if (std::abs(at_b1) > tol) {
    tracker.note("clause (b) failed: A_1 is not degenerate at b_1, A_1(Z,Z) = " + format_shortest(at_b1));
  }
  if (worst_a > tol || std::abs(at_b1) > tol) return tracker.finish();

  // (c) the product formula over ordered pairs of distinct indices.
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      if (i != j) pairs.emplace_back(i, j);
    }
  }
  double worst_c = 0;
  for (double u : grid.u) {
    for (double alpha : grid.alpha) {
      for (const auto& sigma : grid.sigmas) {
        const auto psi = make_psi_point(u, alpha, sigma);
        std::vector<TangentVector<double>> dZ;
        std::vector<double> M;
        for (auto [i, j] : pairs) {
          const auto chain = h_ij(psi.q, sigma(i), sigma(j));
          dZ.push_back(differential(chain.map, z_one()));
          M.push_back(M_profile(a1, chain.u, tol));
        }
        for (std::size_t x = 0; x < pairs.size(); ++x) {
          for (std::size_t y = 0; y < pairs.size(); ++y) {
            const double lhs = a2(psi.q, dZ[x], dZ[y]);
            const double rhs = M[x] * M[y];
            const double dev = relative_deviation(lhs, rhs, scale);
            worst_c = std::max(worst_c, dev);
            tracker.record(dev, [&] {
              return psi_witness(psi, {dZ[x], dZ[y]}, {lhs, rhs},
                                 " pairs=(" + std::to_string(pairs[x].first) + std::to_string(pairs[x].second) + "),(" +
                                     std::to_string(pairs[y].first) + std::to_string(pairs[y].second) + ")");
            });
          }
        }
      }
    }
  }
  if (worst_c > tol) tracker.note("clause (c) failed: A_2(dH Z, dH Z) differs from M(u) M(u')");
  return tracker.finish();
}

Reconstruction reconstruct_lambda(const FamilyOracle<double>& family, Rng& rng, const ReconstructionOptions& options) {
  Reconstruction out;
  out.prerequisites.push_back(check_family_invariance(family, options.invariance_trials, options.tol, rng));
  out.prerequisites.push_back(check_C1(family.at(2), family.at(1), options.grid).report);
  require(out.prerequisites);

  out.value = 0.5 * a1_diag(family.at(1), 0.5);
  DeviationTracker tracker("reconstruct_lambda[" + family.label + "]", options.tol);
  const double lambda = out.value;
  certify(family, [lambda](int n) { return scaled<double>(tensor_d<double>(n), lambda); }, options.samples_per_n, rng,
          tracker);
  tracker.note("lambda = " + format_shortest(lambda));
  out.report = tracker.finish();
  return out;
}

Reconstruction reconstruct_mu(const FamilyOracle<double>& family, Rng& rng, const ReconstructionOptions& options) {
  Reconstruction out;
  out.prerequisites.push_back(check_family_invariance(family, options.invariance_trials, options.tol, rng));
  out.prerequisites.push_back(check_C2(family, options.grid, options.tol));
  require(out.prerequisites);

  const auto a1 = family.at(1);
  const double m = M_profile(a1, 1.0 / 3.0);
  out.value = 16.0 / 9.0 * m * m;
  const double mu = out.value;
  DeviationTracker tracker("reconstruct_mu[" + family.label + "]", options.tol);
  certify(family, [mu](int n) { return scaled<double>(tensor_s<double>(n), mu); }, options.samples_per_n, rng, tracker);
  for (double u : options.grid.u) {
    const double lhs = M_profile(a1, u);
    const double rhs = std::sqrt(mu) / 2 * (1 / (1 - u) - 1 / u);
    tracker.record(relative_deviation(lhs, rhs),
                   [&] { return Witness{{u, 1 - u}, {}, {lhs, rhs}, "M(u) closed form at u=" + format_shortest(u)}; });
  }
  tracker.note("mu = " + format_shortest(mu));
  out.report = tracker.finish();
  return out;
}

}  // namespace simplexgeo
