#pragma once

#include "simplexgeo/matrix.hpp"

namespace simplexgeo {

/// Spectral summary of a symmetric gram matrix.
struct GramAnalysis {
  bool symmetric = false;
  bool positive_definite = false;   // Cholesky succeeded
  bool positive_semidefinite = false;
  int rank = 0;                     // eigenvalues above rel_tol * max |eigenvalue|
  double min_eigenvalue = 0;
  double max_eigenvalue = 0;
};

GramAnalysis analyze_gram(const DenseMatrix<double>& g, double rel_tol = 1e-10);

}  // namespace simplexgeo
