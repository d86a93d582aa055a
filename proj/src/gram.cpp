#include "simplexgeo/gram.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace simplexgeo {

GramAnalysis analyze_gram(const DenseMatrix<double>& g, double rel_tol) {
  GramAnalysis out;
  const int n = g.rows();
  if (n == 0 || g.cols() != n) return out;

  Eigen::MatrixXd m(n, n);
  double scale = 0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      m(r, c) = g.at(r, c);
      scale = std::max(scale, std::abs(g.at(r, c)));
    }
  }
  out.symmetric = (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * std::max(scale, 1.0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  out.min_eigenvalue = ev.minCoeff();
  out.max_eigenvalue = ev.maxCoeff();
  const double spread = ev.cwiseAbs().maxCoeff();
  const double cutoff = rel_tol * spread;
  out.rank = static_cast<int>((ev.array() > cutoff).count() + (ev.array() < -cutoff).count());
  out.positive_semidefinite = out.min_eigenvalue >= -cutoff;

  Eigen::LLT<Eigen::MatrixXd> llt(m);
  out.positive_definite = out.symmetric && llt.info() == Eigen::Success && out.min_eigenvalue > cutoff;
  return out;
}

}  // namespace simplexgeo
