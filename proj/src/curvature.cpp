#include "spanlab/curvature.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "spanlab/error.hpp"

namespace spanlab {

Eigen::MatrixXcd metric_derivative_matrix(const KernelModel& model, cplx z, int n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "curvature order must be >= 0");
  if (n > model.basis().max_order()) {
    throw Error(ErrorKind::OrderOverflow, "order " + std::to_string(n) +
                                              " exceeds the basis derivative limit");
  }
  model.check_interior(z);
  const Eigen::MatrixXcd y = model.jet(z, n);
  Eigen::MatrixXcd m = std::numbers::pi * (y.transpose() * y.conjugate());
  for (int j = 0; j <= n; ++j) {
    m(j, j) = m(j, j).real();
    for (int k = j + 1; k <= n; ++k) m(k, j) = std::conj(m(j, k));
  }
  return m;
}

LogDeterminant equilibrated_log_determinant(const Eigen::MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  Eigen::VectorXd d(n);
  double log_diag = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = m(i, i).real();
    if (!(v > 0.0)) throw Error(ErrorKind::InvalidArgument, "diagonal must be positive");
    d[i] = 1.0 / std::sqrt(v);
    log_diag += std::log(v);
  }
  const Eigen::MatrixXcd e = d.asDiagonal() * m * d.asDiagonal();
  const cplx det = e.partialPivLu().determinant();
  LogDeterminant out;
  const double a = std::abs(det);
  out.log_abs = (a > 0.0 ? std::log(a) : -std::numeric_limits<double>::infinity()) + log_diag;
  out.phase = a > 0.0 ? det / a : cplx(1.0);
  return out;
}

double burbea_bound(int n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "curvature order must be >= 0");
  double prod = 1.0, fact = 1.0;
  for (int k = 1; k <= n + 1; ++k) {
    fact *= k;
    prod *= fact;
  }
  return -prod * prod;
}

CurvatureReport curvature_from_matrix(cplx z, const Eigen::MatrixXcd& m) {
  CurvatureReport r;
  r.point = z;
  r.order = static_cast<int>(m.rows()) - 1;
  r.matrix = m;
  r.metric = m(0, 0).real();
  r.bound = burbea_bound(r.order);
  const int n = r.order;
  const LogDeterminant ld = equilibrated_log_determinant(m);
  double log_fact = 0.0;
  for (int k = 2; k <= n + 1; ++k) log_fact += std::log(double(k));
  const double log_mag = log_fact - 0.5 * (n + 1) * (n + 2) * std::log(r.metric) + ld.log_abs;
  const cplx k = -std::exp(log_mag) * ld.phase;
  r.kappa = k.real();
  r.imaginary_residue = std::abs(k) > 0.0 ? std::abs(k.imag()) / std::abs(k) : 0.0;
  return r;
}

CurvatureReport curvature_report(const KernelModel& model, cplx z, int n) {
  return curvature_from_matrix(z, metric_derivative_matrix(model, z, n));
}

double higher_order_curvature(const KernelModel& model, cplx z, int n) {
  return curvature_report(model, z, n).kappa;
}

double gaussian_curvature_fd_oracle(const std::function<double(cplx)>& metric, cplx z, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
  const double c = std::log(metric(z));
  const double lap = (std::log(metric(z + h)) + std::log(metric(z - h)) +
                      std::log(metric(z + cplx(0.0, h))) + std::log(metric(z - cplx(0.0, h))) -
                      4.0 * c) /
                     (h * h);
  return -lap / (2.0 * std::exp(c));
}

double gaussian_curvature_fd_oracle(const KernelModel& model, cplx z, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
  if (!(-signed_distance(model.domain(), z) >= 2.0 * h)) {
    throw Error(ErrorKind::NotInterior, "finite-difference stencil needs a margin of 2h");
  }
  return gaussian_curvature_fd_oracle([&](cplx w) { return model.span_metric(w); }, z, h);
}

}  // namespace spanlab
