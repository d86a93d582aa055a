#pragma once

// Metrics on the positive cone R_+^{n+1} of the form
//   g_x(d/dx^i, d/dx^j) = lambda~(h) h / x^i delta_ij + mu~(h),  h = sum_i x^i,
// and their restrictions to simplices. Double precision only: the
// coefficient functions are arbitrary user expressions.

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "simplexgeo/tensor_fields.hpp"

namespace simplexgeo {

struct ConeMetric {
  std::function<double(double)> lambda_fn;
  std::function<double(double)> mu_fn;
  std::string label = "cone";
};

/// Builds both coefficient functions from the expression grammar in expression.hpp.
ConeMetric cone_metric_from_expressions(std::string_view lambda_expr, std::string_view mu_expr);

/// Positivity of lambda~ and lambda~ + mu~ can only be sampled for black-box
/// functions. Returns one warning per violating sample; empty when clean.
std::vector<std::string> check_positivity(const ConeMetric& g, std::span<const double> samples);

/// sum_i lambda~(h) (h / x^i) U^i V^i + mu~(h) (sum U)(sum V).
double cone_eval(const ConeMetric& g, std::span<const double> x, std::span<const double> U, std::span<const double> V);

/// Restriction along the inclusion P_n -> R_+^{n+1}; equals lambda~(1) g^F.
TensorField<double> iota_pullback(const ConeMetric& g, int n);

/// Restriction along j_n : P_{n+1} -> R_+^{n+1}, which drops coordinate n+2.
/// The resulting field lives on P_{n+1}.
TensorField<double> j_pullback(const ConeMetric& g, int n);

}  // namespace simplexgeo
