#include <doctest.h>

#include "oracle.hpp"
#include "simplexgeo/gram.hpp"
#include "simplexgeo/sampling.hpp"
#include "simplexgeo/tensor_fields.hpp"

using namespace simplexgeo;

namespace {

oracle::Vec as_long(std::span<const double> v) { return oracle::Vec(v.begin(), v.end()); }

template <Scalar T>
T zz(const TensorField<T>& A, const SimplexPoint<T>& p, int i, int j) {
  return A(p, z_basis<T>(p.n(), i), z_basis<T>(p.n(), j));
}

}  // namespace

TEST_CASE("fisher values") {
  CHECK(zz(fisher<double>(1), barycenter<double>(1), 1, 1) == doctest::Approx(1));
  for (int n = 1; n <= 6; ++n) {
    for (int i = 1; i <= n + 1; ++i) CHECK(zz(fisher<Rational>(n), barycenter<Rational>(n), i, i) == n);
  }
  auto X = make_tangent<double>(2, {0.1, 0.2, -0.3});
  CHECK(fisher<double>(2)(barycenter<double>(2), X, zero_tangent<double>(2)) == 0);
}

TEST_CASE("fisher agrees with the second derivative of entropy") {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = uniform_int(rng, 1, 6);
    auto p = random_point<double>(n, rng, 0.02);
    auto X = random_tangent<double>(n, rng);
    const double fd = static_cast<double>(oracle::fisher_fd(as_long(p.weights()), as_long(X.components())));
    CHECK(fisher<double>(n)(p, X, X) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("A^d, A^s and A^{lambda,mu} closed values") {
  CHECK(zz(tensor_d<Rational>(1), barycenter<Rational>(1), 1, 1) == 2);
  CHECK(zz(tensor_s<Rational>(3), barycenter<Rational>(3), 1, 2) == 0);
  auto p13 = point_of_u(Rational(1) / 3);
  CHECK(zz(tensor_s<Rational>(1), p13, 1, 1) == Rational(9) / 16);
  // Frozen from oracle::lm(2, 1, (5/8, 3/8), Z, Z) = 128/25.
  auto p58 = point_of_u(Rational(5) / 8);
  CHECK(zz(tensor_lm<Rational>(1, Rational(2), Rational(1)), p58, 1, 1) == Rational(128) / 25);
  const auto ref = oracle::lm(2, 1, {0.625L, 0.375L}, {0.5L, -0.5L}, {0.5L, -0.5L});
  CHECK(static_cast<double>(ref) == doctest::Approx(5.12).epsilon(1e-15));
  CHECK(tensor_lm<double>(1, 2, 1).label() == "lm(2,1)");
}

TEST_CASE("A^{lambda,mu} matches the double-sum definition") {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = uniform_int(rng, 1, 7);
    const double lambda = uniform(rng, -5, 5), mu = uniform(rng, -5, 5);
    auto p = random_point<double>(n, rng);
    auto X = random_tangent<double>(n, rng);
    auto Y = random_tangent<double>(n, rng);
    const auto want = oracle::lm(lambda, mu, as_long(p.weights()), as_long(X.components()), as_long(Y.components()));
    CHECK(tensor_lm<double>(n, lambda, mu)(p, X, Y) == doctest::Approx(static_cast<double>(want)).epsilon(1e-10));
  }
}

TEST_CASE("A^s product form equals the double sum exactly") {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = uniform_int(rng, 1, 5);
    auto p = random_point<Rational>(n, rng);
    auto X = random_tangent<Rational>(n, rng);
    auto Y = random_tangent<Rational>(n, rng);
    Rational dbl = 0;
    for (int i = 1; i <= n + 1; ++i) {
      for (int j = 1; j <= n + 1; ++j) dbl += X(i) * Y(j) / (p(i) * p(j));
    }
    CHECK(tensor_s<Rational>(n)(p, X, Y) == dbl);
  }
}

TEST_CASE("A^s factors are slopes of sum log p") {
  Rng rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = uniform_int(rng, 1, 5);
    auto p = random_point<double>(n, rng, 0.02);
    auto X = random_tangent<double>(n, rng);
    const double slope = static_cast<double>(oracle::log_slope_fd(as_long(p.weights()), as_long(X.components())));
    CHECK(tensor_s<double>(n)(p, X, X) == doctest::Approx(slope * slope).epsilon(1e-6));
  }
}

TEST_CASE("symmetry and bilinearity on samples") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = uniform_int(rng, 1, 6);
    auto A = tensor_lm<Rational>(n, random_scalar<Rational>(rng, -3, 3), random_scalar<Rational>(rng, -3, 3));
    auto p = random_point<Rational>(n, rng);
    auto X = random_tangent<Rational>(n, rng);
    auto X2 = random_tangent<Rational>(n, rng);
    auto Y = random_tangent<Rational>(n, rng);
    const Rational a = random_scalar<Rational>(rng, -2, 2), b = random_scalar<Rational>(rng, -2, 2);
    CHECK(A(p, X, Y) == A(p, Y, X));
    CHECK(A(p, a * X + b * X2, Y) == a * A(p, X, Y) + b * A(p, X2, Y));
    CHECK(fisher<Rational>(n)(p, X, Y) == fisher<Rational>(n)(p, Y, X));
  }
}

TEST_CASE("dimension checks") {
  auto A = fisher<double>(2);
  CHECK_THROWS_AS(A(barycenter<double>(1), zero_tangent<double>(1), zero_tangent<double>(1)), GeometryError);
  CHECK_THROWS_AS(A(barycenter<double>(2), zero_tangent<double>(1), zero_tangent<double>(2)), GeometryError);
  CHECK_THROWS_AS(pullback(A, scalar_patched<double>(2, 0.5)), GeometryError);
  CHECK_THROWS_AS(gram(A, barycenter<double>(3)), GeometryError);
}

TEST_CASE("pullback by scalar patch preserves A^{lambda,mu}") {
  auto G = scalar_patched<Rational>(1, Rational(4) / 5);
  auto pulled = pullback(tensor_lm<Rational>(2, Rational(2), Rational(1)), G);
  auto p = point_of_u(Rational(5) / 8);
  CHECK(zz(pulled, p, 1, 1) == Rational(128) / 25);
  auto idpull = pullback(fisher<double>(3), identity_embedding<double>(3));
  Rng rng(14);
  auto q = random_point<double>(3, rng);
  auto X = random_tangent<double>(3, rng);
  CHECK(idpull(q, X, X) == fisher<double>(3)(q, X, X));
}

TEST_CASE("pullback by a non-scalar patch breaks invariance") {
  // dG(Z) = (1/4, -9/20, 1/5) at G(b_1) = (1/4, 9/20, 3/10).
  MarkovPatch<Rational> patch(1, Permutation::identity(3), {Rational(1) / 2, Rational(9) / 10});
  auto pulled = pullback(tensor_d<Rational>(2), patched_embedding(patch));
  CHECK(zz(pulled, barycenter<Rational>(1), 1, 1) == Rational(22) / 9);
  CHECK(zz(tensor_d<Rational>(1), barycenter<Rational>(1), 1, 1) == 2);
}

TEST_CASE("fisher scales by alpha under scalar patches and is Markov invariant") {
  Rng rng(15);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = uniform_int(rng, 1, 5);
    const Rational alpha = random_scalar<Rational>(rng, 0.01, 0.99);
    auto G = scalar_patched<Rational>(n, alpha, random_permutation(n + 2, rng));
    auto p = random_point<Rational>(n, rng);
    auto X = random_tangent<Rational>(n, rng);
    auto Y = random_tangent<Rational>(n, rng);
    CHECK(pullback(fisher<Rational>(n + 1), G)(p, X, Y) == alpha * fisher<Rational>(n)(p, X, Y));
    const int N = uniform_int(rng, n, 8);
    auto F = markov_embedding(random_partition<Rational>(n, N, rng));
    CHECK(pullback(fisher<Rational>(N), F)(p, X, Y) == fisher<Rational>(n)(p, X, Y));
  }
}

TEST_CASE("gram matrices") {
  // Z_i - Z_3 = e_i - e_3, so entry (i, j) is sum_k (e_i - e_3)_k (e_j - e_3)_k / (1/3).
  auto g = gram(fisher<Rational>(2), barycenter<Rational>(2));
  CHECK(g.at(0, 0) == 6);
  CHECK(g.at(0, 1) == 3);
  CHECK(g.at(1, 0) == 3);
  CHECK(g.at(1, 1) == 6);
  auto s = gram(tensor_s<Rational>(4), barycenter<Rational>(4));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) CHECK(s.at(i, j) == 0);
  }
}

TEST_CASE("gram reproduces eval through Z coordinates") {
  Rng rng(16);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = uniform_int(rng, 1, 5);
    auto A = tensor_lm<Rational>(n, random_scalar<Rational>(rng, -3, 3), random_scalar<Rational>(rng, -3, 3));
    auto p = random_point<Rational>(n, rng);
    auto X = random_tangent<Rational>(n, rng);
    auto Y = random_tangent<Rational>(n, rng);
    auto g = gram(A, p);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) CHECK(g.at(i, j) == g.at(j, i));
    }
    CHECK(eval_from_gram(g, X, Y) == A(p, X, Y));
  }
}

TEST_CASE("A^d grams are positive definite, A^s grams rank one") {
  Rng rng(18);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = uniform_int(rng, 1, 7);
    auto p = random_point<double>(n, rng);
    auto d = analyze_gram(gram(tensor_d<double>(n), p));
    CHECK(d.symmetric);
    CHECK(d.positive_definite);
    CHECK(d.rank == n);
    auto s = analyze_gram(gram(tensor_s<double>(n), p));
    CHECK(s.symmetric);
    CHECK(s.positive_semidefinite);
    CHECK(s.rank <= 1);
  }
  auto indefinite = analyze_gram(gram(tensor_lm<double>(2, 1, -5), make_point<double>(2, {0.1, 0.2, 0.7})));
  CHECK_FALSE(indefinite.positive_semidefinite);
}

TEST_CASE("scaled and zero tensors") {
  auto p = point_of_u(0.25);
  auto z = z_basis<double>(1, 1);
  CHECK(scaled<double>(tensor_d<double>(1), 3.0)(p, z, z) == doctest::Approx(3 * oracle::a1_d(0.25L)));
  CHECK(zero_tensor<double>(1)(p, z, z) == 0);
  CHECK(scaled<double>(tensor_d<double>(1), 3.0).kind() == TensorKind::d);
}
