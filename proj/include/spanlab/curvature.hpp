#pragma once

#include <functional>

#include <Eigen/Dense>

#include "spanlab/dirichlet.hpp"

namespace spanlab {

struct CurvatureReport {
  cplx point;
  int order = 0;
  /// s(z)
  double metric = 0.0;
  /// [s_{j kbar}], j, k = 0..order
  Eigen::MatrixXcd matrix;
  double kappa = 0.0;
  /// |Im kappa| / |kappa| before the imaginary part is discarded.
  double imaginary_residue = 0.0;
  double bound = 0.0;
};

/// [d^{j+k} s / dz^j dzbar^k](z) for j, k = 0..n, from the exact basis
/// derivatives. Hermitian by construction.
Eigen::MatrixXcd metric_derivative_matrix(const KernelModel& model, cplx z, int n);

struct LogDeterminant {
  double log_abs = 0.0;
  /// det / |det|
  cplx phase = 1.0;
};

/// Determinant of a matrix with positive real diagonal, computed by LU on
/// D^{-1/2} M D^{-1/2} with D = diag(M) and reassembled in log space.
LogDeterminant equilibrated_log_determinant(const Eigen::MatrixXcd& m);

/// kappa_n from a metric derivative matrix of size (n+1) x (n+1).
CurvatureReport curvature_from_matrix(cplx z, const Eigen::MatrixXcd& m);

CurvatureReport curvature_report(const KernelModel& model, cplx z, int n);
double higher_order_curvature(const KernelModel& model, cplx z, int n);

/// -(prod_{k=1}^{n+1} k!)^2
double burbea_bound(int n);

/// -Laplacian(log s) / (2 s) with the 5-point stencil of step h.
/// The model overload requires the stencil to stay 2h inside the domain.
double gaussian_curvature_fd_oracle(const KernelModel& model, cplx z, double h);
double gaussian_curvature_fd_oracle(const std::function<double(cplx)>& metric, cplx z, double h);

}  // namespace spanlab
