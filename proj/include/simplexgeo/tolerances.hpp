#pragma once

namespace simplexgeo {

/// Numerical tolerances, passed explicitly to every operation that needs one.
/// Exact (rational) arithmetic ignores them and compares with equality.
struct Tolerances {
  /// Sum-to-one / sum-to-zero slack accepted by the validating constructors.
  double construction = 1e-12;
  /// Relative slack used when two evaluations are compared.
  double comparison = 1e-9;
};

}  // namespace simplexgeo
