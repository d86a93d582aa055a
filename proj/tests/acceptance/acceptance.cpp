// One line per acceptance criterion; exit status is nonzero when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "simplexgeo/cone.hpp"
#include "simplexgeo/expression.hpp"
#include "simplexgeo/sampling.hpp"
#include "simplexgeo/verify.hpp"

using namespace simplexgeo;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

template <Scalar T>
double inf_norm_diff(std::span<const T> a, std::span<const T> b) {
  double m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(to_double(T(a[k] - b[k]))));
  return m;
}

// ---------------------------------------------------------------------------

Outcome scalar_patch_invariance() {
  const auto t0 = Clock::now();
  Rng rng(101);
  double worst = 0;
  for (int n = 1; n <= 6; ++n) {
    for (int l = 0; l < 20; ++l) {
      const double lambda = uniform(rng, -5, 5), mu = uniform(rng, -5, 5);
      const auto lower = tensor_lm<double>(n, lambda, mu);
      const auto upper = tensor_lm<double>(n + 1, lambda, mu);
      for (int a = 0; a < 10; ++a) {
        const auto pulled = pullback(upper, scalar_patched<double>(n, uniform(rng, 0.01, 0.99), random_permutation(n + 2, rng)));
        for (int s = 0; s < 10; ++s) {
          const auto p = random_point<double>(n, rng);
          const auto X = random_tangent<double>(n, rng);
          const auto Y = random_tangent<double>(n, rng);
          worst = std::max(worst, relative_deviation(pulled(p, X, Y), lower(p, X, Y)));
        }
      }
    }
  }
  const double float_time = seconds_since(t0);

  const auto t1 = Clock::now();
  Rational exact_worst = 0;
  for (int n = 1; n <= 4; ++n) {
    for (int l = 0; l < 20; ++l) {
      const auto lambda = random_scalar<Rational>(rng, -5, 5), mu = random_scalar<Rational>(rng, -5, 5);
      const auto lower = tensor_lm<Rational>(n, lambda, mu);
      const auto upper = tensor_lm<Rational>(n + 1, lambda, mu);
      for (int a = 0; a < 10; ++a) {
        const auto G = scalar_patched<Rational>(n, random_scalar<Rational>(rng, 0.01, 0.99), random_permutation(n + 2, rng));
        const auto pulled = pullback(upper, G);
        for (int s = 0; s < 10; ++s) {
          const auto p = random_point<Rational>(n, rng);
          const auto X = random_tangent<Rational>(n, rng);
          const auto Y = random_tangent<Rational>(n, rng);
          exact_worst = std::max(exact_worst, abs_value(Rational(pulled(p, X, Y) - lower(p, X, Y))));
        }
      }
    }
  }
  const double exact_time = seconds_since(t1);
  const bool pass = worst <= 1e-9 && exact_worst == 0 && float_time < 10;
  return {pass, "max rel dev " + fmt("%.3g", worst) + " (tol 1e-9), rational |dev| " + to_string(exact_worst) +
                    ", float " + fmt("%.2f", float_time) + " s, rational " + fmt("%.2f", exact_time) + " s"};
}

Outcome nonscalar_violation() {
  Rng rng(202);
  int found = 0, total = 0;
  double smallest = INFINITY;
  const double pairs[3][2] = {{1, 0}, {0, 1}, {1, 1}};
  for (int k = 0; k < 50; ++k) {
    const auto patch = random_patch<double>(uniform_int(rng, 1, 5), rng, true);
    for (const auto& lm : pairs) {
      const auto r = search_patch_noninvariance<double>(patch, lm[0], lm[1], rng);
      ++total;
      if (r.status == CheckStatus::failed && r.max_deviation > 1e-6) ++found;
      smallest = std::min(smallest, r.max_deviation);
    }
  }
  MarkovPatch<double> closed(1, Permutation::identity(3), {0.5, 0.9});
  const auto z = z_basis<double>(1, 1);
  const double pulled = pullback(tensor_d<double>(2), patched_embedding(closed))(barycenter<double>(1), z, z);
  const double base = tensor_d<double>(1)(barycenter<double>(1), z, z);
  const double gap = (pulled - base) / base;
  const bool closed_ok = std::abs(pulled - 22.0 / 9) <= 1e-6 && std::abs(base - 2) <= 1e-6 &&
                         std::abs(pulled - base - 4.0 / 9) <= 1e-6 && std::abs(gap - 2.0 / 9) <= 1e-6;
  return {found == total && closed_ok, std::to_string(found) + "/" + std::to_string(total) +
                                           " witnesses, smallest max dev " + fmt("%.3g", smallest) + "; closed case " +
                                           fmt("%.6f", pulled) + " vs " + fmt("%.6f", base) + " (gap " +
                                           fmt("%.4f", gap) + ")"};
}

Outcome h_round_trips() {
  Rng rng(303);
  double pos = 0, diff = 0, pos3 = 0, diff3 = 0;
  for (int k = 0; k < 1000; ++k) {
    const int n = uniform_int(rng, 1, 6);
    const auto p = random_point<double>(n, rng);
    const int i = uniform_int(rng, 1, n + 1);
    int j = uniform_int(rng, 1, n);
    if (j >= i) ++j;
    const auto H = h_ij(p, i, j);
    pos = std::max(pos, inf_norm_diff<double>(simplexgeo::apply(H.map, point_of_u(H.u)).weights(), p.weights()));
    const auto lhs = differential(H.map, z_basis<double>(1, 1)) * (2 / (p(i) + p(j)));
    diff = std::max(diff, inf_norm_diff<double>(lhs.components(), (z_basis<double>(n, i) - z_basis<double>(n, j)).components()));
  }
  for (int k = 0; k < 1000; ++k) {
    const int n = uniform_int(rng, 2, 6);
    const auto p = random_point<double>(n, rng);
    const auto idx = random_permutation(n + 1, rng);
    const int i = idx(1), j = idx(2), l = idx(3);
    const auto H = h_ijk(p, i, j, l);
    const double s = p(i) + p(j) + p(l);
    pos3 = std::max(pos3, inf_norm_diff<double>(simplexgeo::apply(H.map, H.q).weights(), p.weights()));
    const auto d12 = differential(H.map, z_basis<double>(2, 1) - z_basis<double>(2, 2)) * (1 / s);
    const auto d13 = differential(H.map, z_basis<double>(2, 1) - z_basis<double>(2, 3)) * (1 / s);
    diff3 = std::max(diff3, inf_norm_diff<double>(d12.components(), (z_basis<double>(n, i) - z_basis<double>(n, j)).components()));
    diff3 = std::max(diff3, inf_norm_diff<double>(d13.components(), (z_basis<double>(n, i) - z_basis<double>(n, l)).components()));
  }
  const double worst = std::max({pos, diff, pos3, diff3});
  return {worst <= 1e-12, "h_ij point " + fmt("%.2g", pos) + ", differential " + fmt("%.2g", diff) + "; h_ijk point " +
                              fmt("%.2g", pos3) + ", differentials " + fmt("%.2g", diff3) + " (tol 1e-12)"};
}

Outcome barycenter_constant() {
  Rng rng(404);
  double worst = 0;
  for (int k = 0; k < 20; ++k) {
    const double lambda = uniform(rng, -5, 5), mu = uniform(rng, -5, 5);
    const auto family = lm_family<double>(lambda, mu, 6);
    for (int n = 1; n <= 6; ++n) {
      const auto r = barycenter_quantity(family, n, 1e-10);
      worst = std::max({worst, relative_deviation(r.value, lambda), r.report.max_deviation});
    }
  }
  return {worst <= 1e-10, "max rel dev from lambda " + fmt("%.3g", worst) + " over 20 (lambda, mu), n <= 6, all i, j"};
}

Outcome lambda_reconstruction() {
  const auto t0 = Clock::now();
  Rng rng(505);
  double worst = 0, cert = 0;
  bool all_passed = true;
  for (int k = 0; k < 50; ++k) {
    const double lambda = uniform(rng, -10, 10);
    const auto r = reconstruct_lambda(d_family<double>(lambda, 6), rng);
    worst = std::max(worst, relative_deviation(r.value, lambda));
    cert = std::max(cert, r.report.max_deviation);
    all_passed = all_passed && r.report.passed;
  }
  const double elapsed = seconds_since(t0);
  return {worst <= 1e-9 && cert <= 1e-9 && all_passed && elapsed < 10,
          "max rel error " + fmt("%.3g", worst) + ", certification " + fmt("%.3g", cert) + " (tol 1e-9), " +
              fmt("%.2f", elapsed) + " s"};
}

Outcome mu_reconstruction() {
  Rng rng(606);
  const auto grid = ConditionGrid::standard().u;
  double worst = 0, profile = 0;
  bool all_passed = true;
  for (int k = 0; k < 50; ++k) {
    const double mu = 10 * (1 - uniform01(rng));
    const auto family = s_family<double>(mu, 6);
    const auto r = reconstruct_mu(family, rng);
    worst = std::max(worst, relative_deviation(r.value, mu));
    all_passed = all_passed && r.report.passed;
    const auto a1 = family.at(1);
    for (double u : grid) {
      const double closed = std::sqrt(mu) / 2 * (1 / (1 - u) - 1 / u);
      profile = std::max(profile, relative_deviation(M_profile(a1, u), closed, std::sqrt(mu)));
    }
  }
  return {worst <= 1e-9 && profile <= 1e-9 && all_passed,
          "max rel error " + fmt("%.3g", worst) + ", M(u) closed form " + fmt("%.3g", profile) + " on 23 points"};
}

Outcome condition_discrimination() {
  const auto grid = ConditionGrid::standard();
  double r_err = 0;
  bool c1_ok = true, c2_ok = true;
  for (double lambda : {-2.5, 0.7, 3.7}) {
    const auto d2 = scaled<double>(tensor_d<double>(2), lambda);
    const auto res = check_C1(d2, scaled<double>(tensor_d<double>(1), lambda), grid);
    c1_ok = c1_ok && res.report.passed && res.r_table.size() == grid.u.size();
    for (auto [t, r] : res.r_table) r_err = std::max(r_err, relative_deviation(r, t * t));
    const auto c2 = check_C2(d_family<double>(lambda, 3), grid, 1e-9);
    bool clause_b = false;
    for (const auto& note : c2.notes) clause_b = clause_b || note.find("clause (b)") != std::string::npos;
    c2_ok = c2_ok && !c2.passed && clause_b;
  }
  bool s_ok = true;
  for (double mu : {0.5, 2.25, 9.0}) {
    const auto c1 = check_C1(scaled<double>(tensor_s<double>(2), mu), scaled<double>(tensor_s<double>(1), mu), grid);
    s_ok = s_ok && c1.report.status == CheckStatus::precondition_failed;
    s_ok = s_ok && check_C2(s_family<double>(mu, 3), grid, 1e-9).passed;
  }
  return {c1_ok && r_err <= 1e-8 && c2_ok && s_ok,
          std::string("C1 on lambda A^d ") + (c1_ok ? "passed" : "FAILED") + " with r(t) = t^2 to " + fmt("%.2g", r_err) +
              "; C2 on lambda A^d " + (c2_ok ? "fails at clause (b)" : "UNEXPECTED") + "; mu A^s " +
              (s_ok ? "C1 precondition failure, C2 passed" : "UNEXPECTED")};
}

Outcome campbell() {
  Rng rng(808);
  double worst = 0;
  const char* lambdas[3][2] = {{"1", "0"}, {"t^2 + 2", "t - 3"}, {"3*t", "5"}};
  for (const auto& e : lambdas) {
    const auto g = cone_metric_from_expressions(e[0], e[1]);
    const double scale = Expression::parse(e[0])(1.0);
    for (int k = 0; k < 200; ++k) {
      const int n = uniform_int(rng, 1, 6);
      const auto p = random_point<double>(n, rng);
      const auto X = random_tangent<double>(n, rng);
      const auto Y = random_tangent<double>(n, rng);
      const double want = scale * fisher<double>(n)(p, X, Y);
      worst = std::max(worst, relative_deviation(iota_pullback(g, n)(p, X, Y), want));
    }
  }
  const auto g = cone_metric_from_expressions("1", "0");
  const auto q = make_point<double>(2, {0.3, 0.3, 0.4});
  const auto X = make_tangent<double>(2, {1, -1, 0});
  const double j = j_pullback(g, 1)(q, X, X);
  const double lm = tensor_lm<double>(2, 1, 0)(q, X, X);
  const bool witness = std::abs(j - 4) <= 1e-10 && std::abs(lm - 200.0 / 9) <= 1e-10;
  return {worst <= 1e-10 && witness, "iota vs lambda(1) fisher " + fmt("%.3g", worst) + " on 3 x 200 samples; j witness " +
                                         fmt("%.4f", j) + " vs " + fmt("%.4f", lm)};
}

Outcome factorizations() {
  Rng rng(909);
  int markov_ok = 0, patched_ok = 0, mutants_caught = 0, mutants = 0;
  for (int k = 0; k < 100; ++k) {
    const int n = uniform_int(rng, 1, 4);
    const auto part = random_partition<Rational>(n, uniform_int(rng, n, 7), rng);
    const auto r = factorization_check_markov(part, 3, rng);
    if (r.passed && r.max_deviation == 0) ++markov_ok;
    auto t = part.weights();
    t[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(t.size()) - 1))] += Rational(1) / 7;
    const auto bad = check_markov_factorization<Rational>(part, t, 3, rng);
    ++mutants;
    if (!bad.passed && bad.witness) ++mutants_caught;
  }
  for (int k = 0; k < 100; ++k) {
    const int n = uniform_int(rng, 1, 4);
    const auto patch = random_patch<Rational>(n, rng, k % 5 != 0);
    const int j = uniform_int(rng, 1, n + 1);
    const Rational b = random_scalar<Rational>(rng, 0.1, 0.9);
    Rational amin = 1, amax = 0;
    for (int i = 1; i <= n + 1; ++i) {
      if (i == j) continue;
      amin = std::min(amin, patch.a(i));
      amax = std::max(amax, patch.a(i));
    }
    const Rational share = amin == amax ? Rational(0) : random_scalar<Rational>(rng, 0.1, 0.9);
    const Rational c = b * patch.a(j) + (1 - b) * (amin + share * (amax - amin));
    const auto r = factorization_check_patched(patch, j, b, c, 3, rng);
    if (r.passed && r.max_deviation == 0) ++patched_ok;
    auto t = patched_statistic(patch, b, c);
    t[static_cast<std::size_t>(uniform_int(rng, 0, n + 1))] += Rational(1) / 7;
    const auto bad = check_patched_factorization<Rational>(patch, j, b, c, t, 3, rng);
    ++mutants;
    if (!bad.passed && bad.witness) ++mutants_caught;
  }
  return {markov_ok == 100 && patched_ok == 100 && mutants_caught == mutants,
          "exact: markov " + std::to_string(markov_ok) + "/100, patched " + std::to_string(patched_ok) +
              "/100; mutants caught " + std::to_string(mutants_caught) + "/" + std::to_string(mutants)};
}

Outcome fisher_markov() {
  Rng rng(1010);
  double markov = 0, scalar = 0;
  for (int k = 0; k < 100; ++k) {
    const int n = uniform_int(rng, 1, 8);
    const int N = uniform_int(rng, n, 8);
    const auto pulled = pullback(fisher<double>(N), markov_embedding(random_partition<double>(n, N, rng)));
    const auto p = random_point<double>(n, rng);
    const auto X = random_tangent<double>(n, rng);
    const auto Y = random_tangent<double>(n, rng);
    markov = std::max(markov, relative_deviation(pulled(p, X, Y), fisher<double>(n)(p, X, Y)));
  }
  for (int k = 0; k < 100; ++k) {
    const int n = uniform_int(rng, 1, 7);
    const double alpha = uniform(rng, 0.01, 0.99);
    const auto pulled = pullback(fisher<double>(n + 1), scalar_patched<double>(n, alpha, random_permutation(n + 2, rng)));
    const auto p = random_point<double>(n, rng);
    const auto X = random_tangent<double>(n, rng);
    const auto Y = random_tangent<double>(n, rng);
    scalar = std::max(scalar, relative_deviation(pulled(p, X, Y), alpha * fisher<double>(n)(p, X, Y)));
  }
  return {markov <= 1e-9 && scalar <= 1e-10,
          "Markov pullback " + fmt("%.3g", markov) + " (tol 1e-9); scalar patch vs alpha fisher " + fmt("%.3g", scalar) +
              " (tol 1e-10)"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"scalar-patch invariance", scalar_patch_invariance},
      {"non-scalar violation", nonscalar_violation},
      {"H-construction round trips", h_round_trips},
      {"barycenter quantity", barycenter_constant},
      {"lambda reconstruction", lambda_reconstruction},
      {"mu reconstruction", mu_reconstruction},
      {"C1/C2 discrimination", condition_discrimination},
      {"Campbell cone facts", campbell},
      {"factorizations", factorizations},
      {"fisher under Markov embeddings", fisher_markov},
  };
  int failures = 0, index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
