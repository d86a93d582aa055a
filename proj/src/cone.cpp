#include "simplexgeo/cone.hpp"

#include "simplexgeo/expression.hpp"

namespace simplexgeo {

ConeMetric cone_metric_from_expressions(std::string_view lambda_expr, std::string_view mu_expr) {
  auto lam = Expression::parse(lambda_expr);
  auto mu = Expression::parse(mu_expr);
  std::string label = "cone(" + lam.source() + "; " + mu.source() + ")";
  return ConeMetric{lam, mu, std::move(label)};
}

std::vector<std::string> check_positivity(const ConeMetric& g, std::span<const double> samples) {
  std::vector<std::string> warnings;
  for (double t : samples) {
    const double lam = g.lambda_fn(t);
    const double mu = g.mu_fn(t);
    if (!(lam > 0)) warnings.push_back("lambda(" + format_shortest(t) + ") = " + format_shortest(lam) + " is not positive");
    if (!(lam + mu > 0)) {
      warnings.push_back("lambda + mu at " + format_shortest(t) + " = " + format_shortest(lam + mu) + " is not positive");
    }
  }
  return warnings;
}

double cone_eval(const ConeMetric& g, std::span<const double> x, std::span<const double> U, std::span<const double> V) {
  if (U.size() != x.size() || V.size() != x.size()) {
    throw GeometryError(ErrorKind::DimensionMismatch, "cone point and vectors differ in length");
  }
  double h = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0)) {
      throw GeometryError(ErrorKind::NonPositiveCoordinate, "cone coordinate " + std::to_string(i + 1) + " is not positive");
    }
    h += x[i];
  }
  const double lam = g.lambda_fn(h);
  const double mu = g.mu_fn(h);
  double diag = 0, su = 0, sv = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    diag += (h / x[i]) * U[i] * V[i];
    su += U[i];
    sv += V[i];
  }
  return lam * diag + mu * su * sv;
}

TensorField<double> iota_pullback(const ConeMetric& g, int n) {
  return TensorField<double>(n, TensorKind::cone_restricted, "iota*" + g.label,
                             [g](const auto& p, const auto& X, const auto& Y) {
                               return cone_eval(g, p.weights(), X.components(), Y.components());
                             });
}

TensorField<double> j_pullback(const ConeMetric& g, int n) {
  return TensorField<double>(n + 1, TensorKind::cone_restricted, "j*" + g.label,
                             [g](const auto& q, const auto& X, const auto& Y) {
                               return cone_eval(g, q.weights().first(q.weights().size() - 1),
                                                X.components().first(X.components().size() - 1),
                                                Y.components().first(Y.components().size() - 1));
                             });
}

}  // namespace simplexgeo
