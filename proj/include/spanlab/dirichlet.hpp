#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spanlab/domain.hpp"

namespace spanlab {

inline constexpr int kDefaultOuterDegree = 24;
inline constexpr int kDefaultHoleDegree = 16;
inline constexpr int kDefaultMaxOrder = 6;

struct BasisDegrees {
  int outer = kDefaultOuterDegree;
  /// One entry per hole; an empty list means kDefaultHoleDegree for every hole.
  std::vector<int> holes;

  int hole(std::size_t q) const { return q < holes.size() ? holes[q] : kDefaultHoleDegree; }
};

enum class TermKind { Outer, Hole };

/// Outer term: g = u^e with u = (z - c) / rho, e >= 0.
/// Hole term:  g = v^{-e} with v = (z - a_q) / rho_q, e >= 2.
struct BasisTerm {
  TermKind kind = TermKind::Outer;
  int hole = -1;
  int exponent = 0;
};

/// Derivatives g_k = f_k' of single-valued holomorphic functions on the
/// domain: scaled monomials about the outer-curve mean c (scale rho = max
/// radius of the outer curve about c) and scaled negative powers about each
/// hole anchor (scale rho_q = min radius of the hole curve about a_q).
class DerivativeBasis {
 public:
  DerivativeBasis(std::shared_ptr<const Domain> domain, BasisDegrees degrees,
                  int max_order = kDefaultMaxOrder);

  const Domain& domain() const { return *domain_; }
  std::shared_ptr<const Domain> domain_ptr() const { return domain_; }
  const BasisDegrees& degrees() const { return degrees_; }
  int max_order() const { return max_order_; }

  std::size_t size() const { return terms_.size(); }
  const BasisTerm& term(std::size_t k) const { return terms_[k]; }
  const std::vector<BasisTerm>& terms() const { return terms_; }

  cplx center() const { return center_; }
  double radius() const { return radius_; }
  cplx anchor(std::size_t q) const { return domain_->anchor(q); }
  double hole_radius(std::size_t q) const { return hole_radius_[q]; }

  /// out[k] = g_k^{(order)}(z) for every term.
  void evaluate(cplx z, int order, std::span<cplx> out) const;
  cplx value(std::size_t k, cplx z, int order = 0) const;
  /// Antiderivative of g_k with zero constant term.
  cplx primitive(std::size_t k, cplx z) const;

  /// Trapezoid value of the contour integral of g_k over curve i.
  cplx period(std::size_t k, std::size_t curve) const;

 private:
  std::shared_ptr<const Domain> domain_;
  BasisDegrees degrees_;
  int max_order_;
  std::vector<BasisTerm> terms_;
  cplx center_;
  double radius_ = 1.0;
  std::vector<double> hole_radius_;
};

/// Rejects degrees < 1, anchors outside their holes, and any term whose
/// period around a hole curve does not vanish.
DerivativeBasis build_basis(const Domain& domain, const BasisDegrees& degrees,
                            int max_order = kDefaultMaxOrder);

/// g and a single-valued antiderivative G (G' = g).
struct HolomorphicFunction {
  std::function<cplx(cplx)> value;
  std::function<cplx(cplx)> primitive;
};

/// Integral over the domain of g_j conj(g_k) dA through the boundary form
/// (1/2i) * contour integral of g_j conj(G_k) dz over all curves, evaluated
/// by the trapezoid rule with node doubling until two levels agree to
/// `tolerance` (relative to the integral of the absolute integrand).
cplx dirichlet_inner(const HolomorphicFunction& gj, const HolomorphicFunction& gk,
                     const Domain& domain, double tolerance = 1e-13, int max_nodes = 1 << 16);
cplx dirichlet_inner(const DerivativeBasis& basis, std::size_t j, std::size_t k,
                     double tolerance = 1e-13, int max_nodes = 1 << 16);

struct GramOptions {
  double hermitian_tolerance = 1e-12;
  double pivot_drop = 1e-13;
  /// Relative cut for exact (convolution) trace spectra.
  double prune = 1e-18;
  /// Tail and prune level for sampled (FFT) trace spectra.
  double trace_tolerance = 1e-15;
  int max_trace_nodes = 1 << 20;
};

/// Independent diagonal block of the Gram matrix.
struct GramBlock {
  std::vector<std::size_t> columns;
  Eigen::MatrixXcd gram;
  /// Jacobi scaling 1/sqrt(G_jj).
  Eigen::VectorXd scale;
  /// Pivoted Cholesky of diag(scale) G diag(scale).
  std::vector<int> pivots;
  int rank = 0;
  Eigen::MatrixXcd factor;
};

class GramFactorization {
 public:
  GramFactorization() = default;
  GramFactorization(std::size_t size, std::vector<GramBlock> blocks, double hermitian_residual);

  std::size_t size() const { return size_; }
  int rank() const { return rank_; }
  const std::vector<GramBlock>& blocks() const { return blocks_; }
  /// Block index and position of column k.
  std::pair<std::size_t, std::size_t> locate(std::size_t k) const { return where_[k]; }
  cplx entry(std::size_t j, std::size_t k) const;
  Eigen::MatrixXcd dense() const;
  /// Largest |G_jk - conj(G_kj)| / sqrt(G_jj G_kk) before symmetrization.
  double hermitian_residual() const { return hermitian_residual_; }
  /// (max pivot / min pivot)^2 of the equilibrated factor.
  double condition() const { return condition_; }

 private:
  std::size_t size_ = 0;
  std::vector<GramBlock> blocks_;
  std::vector<std::pair<std::size_t, std::size_t>> where_;
  int rank_ = 0;
  double hermitian_residual_ = 0.0;
  double condition_ = 1.0;
};

/// Assembles the Gram matrix from Fourier spectra of the boundary traces
/// of g_k (times gamma') and of their primitives, splits it into
/// independent blocks, and factors each block.
/// Throws QuadratureNonconvergence if the assembled matrix is not Hermitian
/// to the tolerance, RankZero if nothing survives pivoting.
GramFactorization gram_matrix(const DerivativeBasis& basis, const GramOptions& options = {});

/// Factors blocks whose `columns` and `gram` are already filled in.
GramFactorization factor_blocks(std::size_t size, std::vector<GramBlock> blocks,
                                double hermitian_residual, double pivot_drop);

class KernelModel {
 public:
  KernelModel(DerivativeBasis basis, GramFactorization gram);

  const DerivativeBasis& basis() const { return basis_; }
  const GramFactorization& gram() const { return gram_; }
  const Domain& domain() const { return basis_.domain(); }
  int rank() const { return gram_.rank(); }

  /// Throws NotInterior unless z is strictly inside the domain.
  void check_interior(cplx z) const;

  /// Column j holds the order-j derivatives of an orthonormal basis of the
  /// model space at z (rank rows, order + 1 columns). No interior check.
  Eigen::MatrixXcd jet(cplx z, int order) const;

  cplx kernel(cplx z, cplx zeta) const;
  /// d^j/dz^j d^k/d(conj zeta)^k of the kernel at zeta = z.
  cplx mixed_derivative(cplx z, int j, int k) const;
  double span_metric(cplx z) const;
  /// w with K(., zeta) = sum_k conj(w_k) g_k; zero on dropped columns.
  Eigen::VectorXcd kernel_coefficients(cplx zeta) const;

 private:
  DerivativeBasis basis_;
  GramFactorization gram_;
};

KernelModel build_model(const Domain& domain, const BasisDegrees& degrees,
                        const GramOptions& options = {}, int max_order = kDefaultMaxOrder);

cplx kernel_eval(const KernelModel& model, cplx z, cplx zeta);
cplx kernel_mixed_derivative(const KernelModel& model, cplx z, int j, int k);
double span_metric(const KernelModel& model, cplx z);

/// Interior points used to monitor model convergence when no probe is given:
/// the outer-curve mean pulled toward nodes, kept if well inside.
std::vector<cplx> default_probe_points(const Domain& domain);

struct EscalationOptions {
  BasisDegrees start;
  double tolerance = 1e-6;
  int max_outer = 8192;
  int max_order = kDefaultMaxOrder;
  GramOptions gram;
  /// Quantities compared between successive models; default is the span
  /// metric at default_probe_points.
  std::function<std::vector<double>(const KernelModel&)> probe;
};

struct ConvergedModel {
  std::shared_ptr<const KernelModel> model;
  /// Model one doubling coarser (null if only one round ran).
  std::shared_ptr<const KernelModel> previous;
  /// Largest relative probe change between the last two rounds.
  double epsilon = 0.0;
  int rounds = 0;
  bool converged = false;
};

/// Doubles all degrees from `start` until the probe changes by less than
/// the tolerance or the outer degree would exceed max_outer.
ConvergedModel build_converged_model(const Domain& domain, const EscalationOptions& options = {});

}  // namespace spanlab
