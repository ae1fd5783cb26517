#include "spanlab/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "spanlab/error.hpp"
#include "spanlab/pivoted_cholesky.hpp"
#include "spanlab/spectral.hpp"

namespace spanlab {

namespace {

constexpr double kPi = std::numbers::pi;

double falling(int e, int j) {
  double f = 1.0;
  for (int i = 0; i < j; ++i) f *= e - i;
  return f;
}

double rising(int e, int j) {
  double f = 1.0;
  for (int i = 0; i < j; ++i) f *= e + i;
  return f;
}

void fill_powers(cplx x, int count, std::vector<cplx>& out) {
  out.resize(count);
  if (count == 0) return;
  out[0] = 1.0;
  for (int i = 1; i < count; ++i) out[i] = out[i - 1] * x;
}

}  // namespace

DerivativeBasis::DerivativeBasis(std::shared_ptr<const Domain> domain, BasisDegrees degrees,
                                 int max_order)
    : domain_(std::move(domain)), degrees_(std::move(degrees)), max_order_(max_order) {
  if (degrees_.outer < 1) throw Error(ErrorKind::InvalidArgument, "outer degree must be >= 1");
  if (!degrees_.holes.empty() && degrees_.holes.size() != domain_->hole_count()) {
    throw Error(ErrorKind::InvalidArgument, "need one hole degree per hole");
  }
  if (max_order_ < 0) throw Error(ErrorKind::InvalidArgument, "max order must be >= 0");
  center_ = domain_->outer().mean();
  radius_ = domain_->outer().max_radius_about(center_);
  for (int e = 0; e < degrees_.outer; ++e) terms_.push_back({TermKind::Outer, -1, e});
  for (std::size_t q = 0; q < domain_->hole_count(); ++q) {
    const int n = degrees_.hole(q);
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "hole degree must be >= 1");
    hole_radius_.push_back(domain_->hole_curve(q).min_radius_about(domain_->anchor(q)));
    for (int e = 2; e <= n + 1; ++e) terms_.push_back({TermKind::Hole, static_cast<int>(q), e});
  }
}

void DerivativeBasis::evaluate(cplx z, int order, std::span<cplx> out) const {
  if (order < 0 || order > max_order_) {
    throw Error(ErrorKind::OrderOverflow, "derivative order " + std::to_string(order) +
                                              " exceeds the basis limit " +
                                              std::to_string(max_order_));
  }
  if (out.size() != terms_.size()) throw Error(ErrorKind::InvalidArgument, "output size mismatch");
  std::vector<cplx> pw;
  const cplx u = (z - center_) / radius_;
  fill_powers(u, degrees_.outer, pw);
  const double outer_scale = std::pow(radius_, -order);
  std::size_t k = 0;
  for (int e = 0; e < degrees_.outer; ++e, ++k) {
    out[k] = e < order ? cplx(0.0) : falling(e, order) * outer_scale * pw[e - order];
  }
  for (std::size_t q = 0; q < domain_->hole_count(); ++q) {
    const int n = degrees_.hole(q);
    const cplx w = hole_radius_[q] / (z - domain_->anchor(q));
    fill_powers(w, n + 2 + order, pw);
    const double hole_scale = (order % 2 ? -1.0 : 1.0) * std::pow(hole_radius_[q], -order);
    for (int e = 2; e <= n + 1; ++e, ++k) out[k] = rising(e, order) * hole_scale * pw[e + order];
  }
}

cplx DerivativeBasis::value(std::size_t k, cplx z, int order) const {
  if (order < 0 || order > max_order_) {
    throw Error(ErrorKind::OrderOverflow, "derivative order exceeds the basis limit");
  }
  const BasisTerm& t = terms_.at(k);
  if (t.kind == TermKind::Outer) {
    if (t.exponent < order) return 0.0;
    const cplx u = (z - center_) / radius_;
    return falling(t.exponent, order) * std::pow(radius_, -order) *
           std::pow(u, t.exponent - order);
  }
  const double r = hole_radius_[t.hole];
  const cplx w = r / (z - domain_->anchor(t.hole));
  return (order % 2 ? -1.0 : 1.0) * rising(t.exponent, order) * std::pow(r, -order) *
         std::pow(w, t.exponent + order);
}

cplx DerivativeBasis::primitive(std::size_t k, cplx z) const {
  const BasisTerm& t = terms_.at(k);
  if (t.kind == TermKind::Outer) {
    const cplx u = (z - center_) / radius_;
    return radius_ * std::pow(u, t.exponent + 1) / double(t.exponent + 1);
  }
  const double r = hole_radius_[t.hole];
  const cplx w = r / (z - domain_->anchor(t.hole));
  return r * std::pow(w, t.exponent - 1) / double(1 - t.exponent);
}

cplx DerivativeBasis::period(std::size_t k, std::size_t curve) const {
  const BoundaryCurve& c = domain_->curve(curve);
  const auto pts = c.samples();
  const auto der = c.tangents();
  cplx sum = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) sum += value(k, pts[i]) * der[i];
  return sum * (2.0 * kPi / pts.size());
}

DerivativeBasis build_basis(const Domain& domain, const BasisDegrees& degrees, int max_order) {
  for (std::size_t q = 0; q < domain.hole_count(); ++q) {
    if (domain.hole_curve(q).winding_number(domain.anchor(q)) == 0) {
      throw Error(ErrorKind::InvalidDomain, "anchor point lies outside its hole");
    }
  }
  DerivativeBasis basis(std::make_shared<const Domain>(domain), degrees, max_order);

  // Polynomial terms are entire; only the negative powers can carry a period.
  for (std::size_t q = 0; q < domain.hole_count(); ++q) {
    const BoundaryCurve& c = domain.hole_curve(q);
    const int m = std::max(c.nodes(), 8 * (degrees.hole(q) + 2));
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (basis.term(k).kind != TermKind::Hole) continue;
      cplx sum = 0.0;
      double mass = 0.0;
      for (int i = 0; i < m; ++i) {
        const double t = 2.0 * kPi * i / m;
        const cplx v = basis.value(k, c.point(t)) * c.tangent(t);
        sum += v;
        mass += std::abs(v);
      }
      if (std::abs(sum) > 1e-10 * mass) {
        throw Error(ErrorKind::InvalidDomain, "basis term has a nonzero period around a hole");
      }
    }
  }
  return basis;
}

cplx dirichlet_inner(const HolomorphicFunction& gj, const HolomorphicFunction& gk,
                     const Domain& domain, double tolerance, int max_nodes) {
  cplx previous = 0.0;
  bool have_previous = false;
  for (int m = 32; m <= max_nodes; m *= 2) {
    cplx sum = 0.0;
    double mass = 0.0;
    for (std::size_t i = 0; i < domain.curve_count(); ++i) {
      const BoundaryCurve& c = domain.curve(i);
      for (int n = 0; n < m; ++n) {
        const double t = 2.0 * kPi * n / m;
        const cplx z = c.point(t);
        const cplx term = gj.value(z) * std::conj(gk.primitive(z)) * c.tangent(t);
        sum += term;
        mass += std::abs(term);
      }
    }
    const cplx value = sum * (2.0 * kPi / m) / cplx(0.0, 2.0);
    mass *= kPi / m;
    if (have_previous && std::abs(value - previous) <= tolerance * mass) return value;
    previous = value;
    have_previous = true;
  }
  throw Error(ErrorKind::QuadratureNonconvergence,
              "Dirichlet inner product did not settle under node doubling");
}

cplx dirichlet_inner(const DerivativeBasis& basis, std::size_t j, std::size_t k, double tolerance,
                     int max_nodes) {
  const HolomorphicFunction fj{[&](cplx z) { return basis.value(j, z); },
                               [&](cplx z) { return basis.primitive(j, z); }};
  const HolomorphicFunction fk{[&](cplx z) { return basis.value(k, z); },
                               [&](cplx z) { return basis.primitive(k, z); }};
  return dirichlet_inner(fj, fk, basis.domain(), tolerance, max_nodes);
}

GramFactorization::GramFactorization(std::size_t size, std::vector<GramBlock> blocks,
                                     double hermitian_residual)
    : size_(size), blocks_(std::move(blocks)), hermitian_residual_(hermitian_residual) {
  where_.assign(size_, {std::numeric_limits<std::size_t>::max(), 0});
  double hi = 0.0, lo = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const GramBlock& blk = blocks_[b];
    for (std::size_t i = 0; i < blk.columns.size(); ++i) where_[blk.columns[i]] = {b, i};
    rank_ += blk.rank;
    for (int i = 0; i < blk.rank; ++i) {
      hi = std::max(hi, blk.factor(i, i).real());
      lo = std::min(lo, blk.factor(i, i).real());
    }
  }
  for (const auto& w : where_) {
    if (w.first == std::numeric_limits<std::size_t>::max()) {
      throw Error(ErrorKind::InvalidArgument, "Gram blocks do not cover every column");
    }
  }
  if (rank_ > 0) condition_ = (hi / lo) * (hi / lo);
}

cplx GramFactorization::entry(std::size_t j, std::size_t k) const {
  const auto [bj, ij] = where_.at(j);
  const auto [bk, ik] = where_.at(k);
  if (bj != bk) return 0.0;
  return blocks_[bj].gram(ij, ik);
}

Eigen::MatrixXcd GramFactorization::dense() const {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(size_, size_);
  for (const GramBlock& blk : blocks_) {
    for (std::size_t i = 0; i < blk.columns.size(); ++i) {
      for (std::size_t j = 0; j < blk.columns.size(); ++j) {
        g(blk.columns[i], blk.columns[j]) = blk.gram(i, j);
      }
    }
  }
  return g;
}

GramFactorization factor_blocks(std::size_t size, std::vector<GramBlock> blocks,
                                double hermitian_residual, double pivot_drop) {
  for (GramBlock& blk : blocks) {
    const int n = static_cast<int>(blk.columns.size());
    blk.scale.resize(n);
    for (int i = 0; i < n; ++i) {
      const double d = blk.gram(i, i).real();
      blk.scale[i] = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
    }
    Eigen::MatrixXcd a = blk.scale.asDiagonal() * blk.gram * blk.scale.asDiagonal();
    PivotedCholesky pc = pivoted_cholesky(a, pivot_drop);
    blk.pivots = std::move(pc.pivots);
    blk.rank = pc.rank;
    blk.factor = std::move(pc.factor);
  }
  GramFactorization out(size, std::move(blocks), hermitian_residual);
  if (out.rank() == 0) throw Error(ErrorKind::RankZero, "every Gram pivot was dropped");
  return out;
}

namespace {

struct Traces {
  // [column][curve]
  std::vector<std::vector<Spectrum>> a;
  std::vector<std::vector<Spectrum>> b;
};

Traces boundary_traces(const DerivativeBasis& basis, const GramOptions& opt) {
  const Domain& dom = basis.domain();
  const std::size_t ncurves = dom.curve_count();
  Traces tr;
  tr.a.assign(basis.size(), std::vector<Spectrum>(ncurves));
  tr.b.assign(basis.size(), std::vector<Spectrum>(ncurves));

  for (std::size_t i = 0; i < ncurves; ++i) {
    const BoundaryCurve& curve = dom.curve(i);
    const Spectrum tangent = tangent_spectrum(curve);

    const Spectrum u = curve_spectrum(curve, basis.center(), basis.radius());
    Spectrum p = single_mode(0, 1.0);
    std::size_t k = 0;
    for (int e = 0; e < basis.degrees().outer; ++e, ++k) {
      Spectrum a = convolve(p, tangent);
      prune(a, opt.prune);
      Spectrum next = convolve(p, u);
      prune(next, opt.prune);
      tr.a[k][i] = std::move(a);
      tr.b[k][i] = scaled(next, basis.radius() / (e + 1));
      p = std::move(next);
    }

    for (std::size_t q = 0; q < dom.hole_count(); ++q) {
      const int n = basis.degrees().hole(q);
      const cplx anchor = basis.anchor(q);
      const double r = basis.hole_radius(q);
      const Spectrum v = curve_spectrum(curve, anchor, r);
      // w[e] = spectrum of v^{-e}, e = 1..n+1
      std::vector<Spectrum> w(n + 2);
      for (int e = 1; e <= n + 1; ++e) {
        if (v.size() == 1) {
          w[e] = single_mode(-e * v.modes[0], std::pow(v.coefs[0], -e));
        } else {
          w[e] = adaptive_spectrum(
              [&](double t) { return std::pow((curve.point(t) - anchor) / r, -e); }, 64,
              opt.max_trace_nodes, opt.trace_tolerance);
        }
      }
      for (int e = 2; e <= n + 1; ++e, ++k) {
        Spectrum a = convolve(w[e], tangent);
        prune(a, opt.prune);
        tr.a[k][i] = std::move(a);
        tr.b[k][i] = scaled(w[e - 1], r / (1.0 - e));
      }
    }
  }
  return tr;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

GramFactorization gram_matrix(const DerivativeBasis& basis, const GramOptions& options) {
  const Traces tr = boundary_traces(basis, options);
  const std::size_t n = basis.size();
  const std::size_t ncurves = basis.domain().curve_count();

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::unordered_map<long long, std::size_t> owner;
  auto visit = [&](std::size_t col, std::size_t curve, const Spectrum& s) {
    for (int mode : s.modes) {
      const long long key = static_cast<long long>(curve) * (1LL << 32) + mode + (1LL << 31);
      auto [it, fresh] = owner.emplace(key, col);
      if (!fresh) {
        const std::size_t ra = find_root(parent, it->second);
        const std::size_t rb = find_root(parent, col);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
    }
  };
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < ncurves; ++i) {
      visit(k, i, tr.a[k][i]);
      visit(k, i, tr.b[k][i]);
    }
  }

  std::vector<GramBlock> blocks;
  std::unordered_map<std::size_t, std::size_t> block_of_root;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t r = find_root(parent, k);
    auto [it, fresh] = block_of_root.emplace(r, blocks.size());
    if (fresh) blocks.emplace_back();
    blocks[it->second].columns.push_back(k);
  }

  double residual = 0.0;
  for (GramBlock& blk : blocks) {
    const std::size_t m = blk.columns.size();
    blk.gram.resize(m, m);
    for (std::size_t x = 0; x < m; ++x) {
      for (std::size_t y = 0; y < m; ++y) {
        cplx sum = 0.0;
        for (std::size_t i = 0; i < ncurves; ++i) {
          sum += spectral_inner(tr.a[blk.columns[x]][i], tr.b[blk.columns[y]][i]);
        }
        blk.gram(x, y) = cplx(0.0, -kPi) * sum;
      }
    }
    for (std::size_t x = 0; x < m; ++x) {
      for (std::size_t y = x; y < m; ++y) {
        const double norm = std::sqrt(std::abs(blk.gram(x, x).real() * blk.gram(y, y).real()));
        const double gap = std::abs(blk.gram(x, y) - std::conj(blk.gram(y, x)));
        if (norm > 0.0) {
          residual = std::max(residual, gap / norm);
        } else if (gap > 0.0) {
          residual = std::max(residual, gap / std::max(std::abs(blk.gram(x, y)), 1e-300));
        }
      }
    }
    const Eigen::MatrixXcd sym = 0.5 * (blk.gram + blk.gram.adjoint());
    blk.gram = sym;
  }
  if (!(residual <= options.hermitian_tolerance)) {
    throw Error(ErrorKind::QuadratureNonconvergence,
                "assembled Gram matrix is not Hermitian (residual " + std::to_string(residual) +
                    ")");
  }
  return factor_blocks(n, std::move(blocks), residual, options.pivot_drop);
}

KernelModel::KernelModel(DerivativeBasis basis, GramFactorization gram)
    : basis_(std::move(basis)), gram_(std::move(gram)) {
  if (gram_.size() != basis_.size()) {
    throw Error(ErrorKind::InvalidArgument, "Gram size does not match the basis");
  }
}

void KernelModel::check_interior(cplx z) const {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || !strictly_inside(domain(), z)) {
    throw Error(ErrorKind::NotInterior, "evaluation point is not strictly inside the domain");
  }
}

Eigen::MatrixXcd KernelModel::jet(cplx z, int order) const {
  const std::size_t n = basis_.size();
  std::vector<std::vector<cplx>> vals(order + 1, std::vector<cplx>(n));
  for (int j = 0; j <= order; ++j) basis_.evaluate(z, j, vals[j]);
  Eigen::MatrixXcd y(gram_.rank(), order + 1);
  std::vector<cplx> x;
  int row = 0;
  for (const GramBlock& blk : gram_.blocks()) {
    if (blk.rank == 0) continue;
    x.resize(blk.rank);
    for (int j = 0; j <= order; ++j) {
      for (int i = 0; i < blk.rank; ++i) {
        const int p = blk.pivots[i];
        x[i] = blk.scale[p] * vals[j][blk.columns[p]];
      }
      forward_solve(blk.factor, blk.rank, x.data());
      for (int i = 0; i < blk.rank; ++i) y(row + i, j) = x[i];
    }
    row += blk.rank;
  }
  return y;
}

cplx KernelModel::kernel(cplx z, cplx zeta) const {
  check_interior(z);
  check_interior(zeta);
  const Eigen::MatrixXcd a = jet(z, 0);
  const Eigen::MatrixXcd b = jet(zeta, 0);
  cplx sum = 0.0;
  for (int i = 0; i < a.rows(); ++i) sum += a(i, 0) * std::conj(b(i, 0));
  return sum;
}

cplx KernelModel::mixed_derivative(cplx z, int j, int k) const {
  if (j < 0 || k < 0) throw Error(ErrorKind::InvalidArgument, "derivative orders must be >= 0");
  if (std::max(j, k) > basis_.max_order()) {
    throw Error(ErrorKind::OrderOverflow, "derivative order exceeds the basis limit");
  }
  check_interior(z);
  const Eigen::MatrixXcd y = jet(z, std::max(j, k));
  cplx sum = 0.0;
  for (int i = 0; i < y.rows(); ++i) sum += y(i, j) * std::conj(y(i, k));
  return sum;
}

double KernelModel::span_metric(cplx z) const {
  check_interior(z);
  const Eigen::MatrixXcd y = jet(z, 0);
  return kPi * y.col(0).squaredNorm();
}

Eigen::VectorXcd KernelModel::kernel_coefficients(cplx zeta) const {
  check_interior(zeta);
  const Eigen::MatrixXcd y = jet(zeta, 0);
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(basis_.size());
  std::vector<cplx> x;
  int row = 0;
  for (const GramBlock& blk : gram_.blocks()) {
    if (blk.rank == 0) continue;
    x.resize(blk.rank);
    for (int i = 0; i < blk.rank; ++i) x[i] = y(row + i, 0);
    backward_solve_adjoint(blk.factor, blk.rank, x.data());
    for (int i = 0; i < blk.rank; ++i) {
      const int p = blk.pivots[i];
      w[blk.columns[p]] = blk.scale[p] * x[i];
    }
    row += blk.rank;
  }
  return w;
}

KernelModel build_model(const Domain& domain, const BasisDegrees& degrees,
                        const GramOptions& options, int max_order) {
  DerivativeBasis basis = build_basis(domain, degrees, max_order);
  GramFactorization gram = gram_matrix(basis, options);
  return KernelModel(std::move(basis), std::move(gram));
}

cplx kernel_eval(const KernelModel& model, cplx z, cplx zeta) { return model.kernel(z, zeta); }

cplx kernel_mixed_derivative(const KernelModel& model, cplx z, int j, int k) {
  return model.mixed_derivative(z, j, k);
}

double span_metric(const KernelModel& model, cplx z) { return model.span_metric(z); }

std::vector<cplx> default_probe_points(const Domain& domain) {
  const cplx c = domain.outer().mean();
  const double margin = 0.05 * domain.diameter();
  std::vector<cplx> out;
  auto keep = [&](cplx z) {
    if (-signed_distance(domain, z) > margin) out.push_back(z);
  };
  keep(c);
  const auto pts = domain.outer().samples();
  for (int i = 0; i < 8; ++i) {
    const cplx b = pts[i * pts.size() / 8];
    for (double s : {0.5, 0.75}) keep(c + s * (b - c));
  }
  if (out.empty()) {
    throw Error(ErrorKind::InvalidArgument, "no default probe points; supply a probe");
  }
  return out;
}

ConvergedModel build_converged_model(const Domain& domain, const EscalationOptions& options) {
  auto probe = options.probe;
  if (!probe) {
    const std::vector<cplx> pts = default_probe_points(domain);
    probe = [pts](const KernelModel& m) {
      std::vector<double> v;
      for (cplx z : pts) v.push_back(m.span_metric(z));
      return v;
    };
  }
  BasisDegrees deg = options.start;
  if (deg.holes.empty()) deg.holes.assign(domain.hole_count(), kDefaultHoleDegree);

  ConvergedModel out;
  std::vector<double> last;
  while (true) {
    auto model = std::make_shared<const KernelModel>(
        build_model(domain, deg, options.gram, options.max_order));
    std::vector<double> now = probe(*model);
    ++out.rounds;
    out.previous = out.model;
    out.model = model;
    if (out.previous) {
      double eps = 0.0;
      for (std::size_t i = 0; i < now.size(); ++i) {
        const double d = std::abs(now[i] - last[i]) / std::max(std::abs(now[i]), 1e-300);
        eps = std::isfinite(d) ? std::max(eps, d) : std::numeric_limits<double>::infinity();
      }
      out.epsilon = eps;
      if (eps < options.tolerance) {
        out.converged = true;
        break;
      }
    }
    last = std::move(now);
    if (2 * deg.outer > options.max_outer) break;
    deg.outer *= 2;
    for (int& h : deg.holes) h *= 2;
  }
  return out;
}

}  // namespace spanlab
