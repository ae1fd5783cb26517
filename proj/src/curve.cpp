#include "spanlab/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "spanlab/error.hpp"

namespace spanlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_parameter(double t) {
  t = std::fmod(t, kTwoPi);
  return t < 0.0 ? t + kTwoPi : t;
}

}  // namespace

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::InvalidDomain: return "invalid domain";
    case ErrorKind::NotInterior: return "point not strictly interior";
    case ErrorKind::StepLeavesDomain: return "approach step leaves the domain";
    case ErrorKind::EmptyClip: return "empty-clip";
    case ErrorKind::DegenerateGradient: return "degenerate gradient";
    case ErrorKind::QuadratureNonconvergence: return "quadrature non-convergence";
    case ErrorKind::RankZero: return "rank-0 Gram matrix";
    case ErrorKind::OrderOverflow: return "derivative order overflow";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Io: return "I/O error";
  }
  return "error";
}

BoundaryCurve::BoundaryCurve(std::vector<cplx> coefficients, int nodes)
    : coef_(std::move(coefficients)), nodes_(nodes) {
  if (coef_.empty() || coef_.size() % 2 == 0) {
    throw Error(ErrorKind::InvalidArgument, "curve coefficient list must have odd length 2d+1");
  }
  if (nodes_ < 16) {
    throw Error(ErrorKind::InvalidArgument, "curve needs at least 16 quadrature nodes");
  }
  degree_ = static_cast<int>(coef_.size() - 1) / 2;
  sample();

  double scale = 0.0;
  for (const cplx& z : samples_) scale = std::max(scale, std::abs(z - mean()));
  for (const cplx& d : tangents_) {
    if (!(std::abs(d) > 1e-12 * std::max(scale, 1e-300))) {
      throw Error(ErrorKind::InvalidDomain, "curve has a vanishing tangent at a node");
    }
  }

  const double tol = 0.5 * min_node_spacing();
  for (int i = 0; i < nodes_; ++i) {
    for (int j = i + 2; j < nodes_; ++j) {
      if (i == 0 && j == nodes_ - 1) continue;
      if (std::abs(samples_[i] - samples_[j]) < tol) {
        throw Error(ErrorKind::InvalidDomain, "curve is not simple at sample resolution");
      }
    }
  }
}

BoundaryCurve BoundaryCurve::circle(cplx center, double radius, bool counterclockwise, int nodes) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "circle radius must be positive");
  std::vector<cplx> c(3, 0.0);
  c[1] = center;
  c[counterclockwise ? 2 : 0] = radius;
  return BoundaryCurve(std::move(c), nodes);
}

BoundaryCurve BoundaryCurve::ellipse(cplx center, double semi_major, double semi_minor,
                                     double rotation, int nodes) {
  if (!(semi_major > 0.0 && semi_minor > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "ellipse semi-axes must be positive");
  }
  const cplx rot = std::polar(1.0, rotation);
  std::vector<cplx> c(3, 0.0);
  c[0] = rot * 0.5 * (semi_major - semi_minor);
  c[1] = center;
  c[2] = rot * 0.5 * (semi_major + semi_minor);
  return BoundaryCurve(std::move(c), nodes);
}

BoundaryCurve BoundaryCurve::from_modes(std::span<const std::pair<int, cplx>> modes, int nodes) {
  int d = 0;
  for (const auto& [k, c] : modes) d = std::max(d, std::abs(k));
  std::vector<cplx> coef(2 * d + 1, 0.0);
  for (const auto& [k, c] : modes) coef[k + d] += c;
  return BoundaryCurve(std::move(coef), nodes);
}

BoundaryCurve BoundaryCurve::smoothed_polygon(std::span<const cplx> vertices, int modes,
                                              int nodes) {
  const std::size_t n = vertices.size();
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "polygon needs at least 3 vertices");
  if (modes < 1) throw Error(ErrorKind::InvalidArgument, "polygon smoothing needs modes >= 1");

  std::vector<double> edge(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    edge[i] = std::abs(vertices[(i + 1) % n] - vertices[i]);
    if (!(edge[i] > 0.0)) throw Error(ErrorKind::InvalidArgument, "repeated polygon vertex");
    total += edge[i];
  }
  // vertex parameters proportional to arc length
  std::vector<double> t(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) t[i + 1] = t[i] + kTwoPi * edge[i] / total;

  std::vector<cplx> coef(2 * modes + 1, 0.0);
  cplx c0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    c0 += (t[i + 1] - t[i]) * 0.5 * (vertices[i] + vertices[(i + 1) % n]);
  }
  coef[modes] = c0 / kTwoPi;
  // Piecewise-linear gamma: c_k = (1/(2 pi k^2)) sum_i slope_i (e^{-ik t_{i+1}} - e^{-ik t_i}).
  for (int k = 1; k <= modes; ++k) {
    for (int sign : {1, -1}) {
      const int kk = sign * k;
      cplx acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const cplx slope = (vertices[(i + 1) % n] - vertices[i]) / (t[i + 1] - t[i]);
        acc += slope * (std::polar(1.0, -kk * t[i + 1]) - std::polar(1.0, -kk * t[i]));
      }
      const double x = std::numbers::pi * k / (modes + 1);
      const double sigma = std::sin(x) / x;
      coef[kk + modes] = sigma * acc / (kTwoPi * double(k) * double(k));
    }
  }
  return BoundaryCurve(std::move(coef), nodes);
}

cplx BoundaryCurve::coefficient(int k) const {
  if (std::abs(k) > degree_) return 0.0;
  return coef_[k + degree_];
}

double BoundaryCurve::node_parameter(int i) const { return kTwoPi * i / nodes_; }

void BoundaryCurve::sample() {
  samples_.resize(nodes_);
  tangents_.resize(nodes_);
  for (int i = 0; i < nodes_; ++i) {
    const double t = node_parameter(i);
    samples_[i] = point(t);
    tangents_[i] = tangent(t);
  }
}

cplx BoundaryCurve::point(double t) const {
  cplx sum = 0.0;
  for (int k = -degree_; k <= degree_; ++k) {
    const cplx c = coef_[k + degree_];
    if (c != 0.0) sum += c * std::polar(1.0, k * t);
  }
  return sum;
}

cplx BoundaryCurve::tangent(double t) const {
  cplx sum = 0.0;
  for (int k = -degree_; k <= degree_; ++k) {
    const cplx c = coef_[k + degree_];
    if (c != 0.0 && k != 0) sum += cplx(0.0, k) * c * std::polar(1.0, k * t);
  }
  return sum;
}

cplx BoundaryCurve::acceleration(double t) const {
  cplx sum = 0.0;
  for (int k = -degree_; k <= degree_; ++k) {
    const cplx c = coef_[k + degree_];
    if (c != 0.0 && k != 0) sum -= double(k) * double(k) * c * std::polar(1.0, k * t);
  }
  return sum;
}

cplx BoundaryCurve::outward_normal(double t) const {
  const cplx d = tangent(t);
  return cplx(0.0, -1.0) * d / std::abs(d);
}

double BoundaryCurve::signed_area() const {
  double a = 0.0;
  for (int k = -degree_; k <= degree_; ++k) a += k * std::norm(coef_[k + degree_]);
  return std::numbers::pi * a;
}

double BoundaryCurve::length() const {
  double sum = 0.0;
  for (const cplx& d : tangents_) sum += std::abs(d);
  return sum * kTwoPi / nodes_;
}

double BoundaryCurve::min_node_spacing() const {
  double h = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nodes_; ++i) {
    h = std::min(h, std::abs(samples_[(i + 1) % nodes_] - samples_[i]));
  }
  return h;
}

double BoundaryCurve::max_node_spacing() const {
  double h = 0.0;
  for (int i = 0; i < nodes_; ++i) {
    h = std::max(h, std::abs(samples_[(i + 1) % nodes_] - samples_[i]));
  }
  return h;
}

double BoundaryCurve::max_radius_about(cplx center) const {
  double r = 0.0;
  for (const cplx& z : samples_) r = std::max(r, std::abs(z - center));
  return r;
}

double BoundaryCurve::min_radius_about(cplx center) const {
  double r = std::numeric_limits<double>::infinity();
  for (const cplx& z : samples_) r = std::min(r, std::abs(z - center));
  return r;
}

bool BoundaryCurve::is_circle(cplx* center, double* radius) const {
  for (int k = -degree_; k <= degree_; ++k) {
    if (std::abs(k) > 1 && coef_[k + degree_] != 0.0) return false;
  }
  const cplx plus = coefficient(1);
  const cplx minus = coefficient(-1);
  if ((plus != 0.0) == (minus != 0.0)) return false;
  if (center) *center = coefficient(0);
  if (radius) *radius = std::abs(plus != 0.0 ? plus : minus);
  return true;
}

BoundaryCurve BoundaryCurve::reversed() const {
  // gamma(-t): c_k -> c_{-k}
  std::vector<cplx> c(coef_.rbegin(), coef_.rend());
  return BoundaryCurve(std::move(c), nodes_);
}

BoundaryCurve BoundaryCurve::mapped(cplx a, cplx b) const {
  std::vector<cplx> c = coef_;
  for (cplx& x : c) x *= a;
  c[degree_] += b;
  return BoundaryCurve(std::move(c), nodes_);
}

BoundaryCurve BoundaryCurve::with_nodes(int nodes) const { return BoundaryCurve(coef_, nodes); }

double BoundaryCurve::refine_nearest(cplx z, double t0, double half_width) const {
  const double lo = t0 - half_width;
  const double hi = t0 + half_width;
  auto dist2 = [&](double t) { return std::norm(point(t) - z); };
  double t = t0;
  for (int it = 0; it < 60; ++it) {
    const cplx r = point(t) - z;
    const cplx d1 = tangent(t);
    const cplx d2 = acceleration(t);
    const double f = std::real(std::conj(r) * d1);
    const double fp = std::norm(d1) + std::real(std::conj(r) * d2);
    double next = fp > 0.0 ? t - f / fp : t - (f > 0.0 ? 0.25 : -0.25) * half_width;
    next = std::clamp(next, lo, hi);
    if (std::abs(next - t) <= 1e-16 * (1.0 + std::abs(t))) {
      t = next;
      break;
    }
    t = next;
  }
  double best = t;
  for (double cand : {lo, hi}) {
    if (dist2(cand) < dist2(best)) best = cand;
  }
  return best;
}

CurvePoint BoundaryCurve::nearest(cplx z) const {
  std::vector<double> d2(nodes_);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nodes_; ++i) {
    d2[i] = std::norm(samples_[i] - z);
    best = std::min(best, d2[i]);
  }
  const double slack = std::sqrt(best) + 2.0 * max_node_spacing();
  const double h = kTwoPi / nodes_;
  CurvePoint out;
  out.distance = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nodes_; ++i) {
    const double prev = d2[(i + nodes_ - 1) % nodes_];
    const double next = d2[(i + 1) % nodes_];
    if (d2[i] > prev || d2[i] > next) continue;
    if (std::sqrt(d2[i]) > slack) continue;
    const double t = refine_nearest(z, node_parameter(i), h);
    const double dist = std::abs(point(t) - z);
    if (dist < out.distance) {
      out.distance = dist;
      out.parameter = wrap_parameter(t);
      out.point = point(t);
    }
  }
  return out;
}

int BoundaryCurve::winding_number(cplx z) const {
  double total = 0.0;
  for (int i = 0; i < nodes_; ++i) {
    const cplx a = samples_[i] - z;
    const cplx b = samples_[(i + 1) % nodes_] - z;
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

std::vector<cplx> BoundaryCurve::dense_samples(double spacing, std::size_t max_points) const {
  double speed = 0.0;
  for (const cplx& d : tangents_) speed = std::max(speed, std::abs(d));
  const double want = std::ceil(1.1 * kTwoPi * speed / spacing);
  const std::size_t count =
      std::clamp<std::size_t>(static_cast<std::size_t>(want), std::size_t(nodes_), max_points);
  std::vector<cplx> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = point(kTwoPi * double(i) / double(count));
  return out;
}

std::vector<cplx> BoundaryCurve::samples_in_ball(cplx center, double radius,
                                                double spacing) const {
  if (!(spacing > 0.0)) throw Error(ErrorKind::InvalidArgument, "spacing must be positive");
  const double h = kTwoPi / nodes_;
  std::vector<cplx> out;
  for (int i = 0; i < nodes_; ++i) {
    const int j = (i + 1) % nodes_;
    const double speed = std::max(std::abs(tangents_[i]), std::abs(tangents_[j]));
    const double arc = 1.5 * speed * h;
    const double near = std::min(std::abs(samples_[i] - center), std::abs(samples_[j] - center));
    if (near > radius + arc) continue;
    const int pieces = std::max(1, static_cast<int>(std::ceil(arc / spacing)));
    for (int k = 0; k < pieces; ++k) {
      const cplx z = point(node_parameter(i) + h * k / pieces);
      if (std::abs(z - center) <= radius) out.push_back(z);
    }
  }
  return out;
}

}  // namespace spanlab
