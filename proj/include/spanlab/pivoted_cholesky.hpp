#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace spanlab {

/// A(piv, piv) ~= L L^H restricted to the first `rank` pivots.
struct PivotedCholesky {
  std::vector<int> pivots;
  int rank = 0;
  /// rank x rank lower triangular.
  Eigen::MatrixXcd factor;
  double max_pivot = 0.0;
  double min_pivot = 0.0;
};

/// Greedy diagonal pivoting on a Hermitian positive semidefinite matrix.
/// Stops once the largest remaining diagonal falls below
/// relative_drop * (largest initial diagonal).
PivotedCholesky pivoted_cholesky(const Eigen::MatrixXcd& a, double relative_drop);

/// Solves L y = x in place for the leading rank x rank block of l.
void forward_solve(const Eigen::MatrixXcd& l, int rank, std::complex<double>* x);
/// Solves L^H y = x in place.
void backward_solve_adjoint(const Eigen::MatrixXcd& l, int rank, std::complex<double>* x);

}  // namespace spanlab
