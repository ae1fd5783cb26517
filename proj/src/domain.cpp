#include "spanlab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "spanlab/error.hpp"

namespace spanlab {

Domain::Domain(BoundaryCurve outer, std::vector<Hole> holes) {
  curves_.push_back(outer.counterclockwise() ? std::move(outer) : outer.reversed());
  for (Hole& h : holes) {
    curves_.push_back(h.curve.counterclockwise() ? h.curve.reversed() : std::move(h.curve));
    anchors_.push_back(h.anchor);
  }

  const BoundaryCurve& out = curves_.front();
  for (std::size_t q = 0; q < anchors_.size(); ++q) {
    const BoundaryCurve& hc = curves_[q + 1];
    for (const cplx& s : hc.samples()) {
      if (out.winding_number(s) != 1) {
        throw Error(ErrorKind::InvalidDomain, "hole curve is not strictly inside the outer curve");
      }
      for (std::size_t r = 0; r < anchors_.size(); ++r) {
        if (r != q && curves_[r + 1].winding_number(s) != 0) {
          throw Error(ErrorKind::InvalidDomain, "hole curves overlap");
        }
      }
    }
    if (hc.winding_number(anchors_[q]) != -1) {
      throw Error(ErrorKind::InvalidDomain, "anchor point does not lie inside its hole");
    }
  }

  const auto pts = out.samples();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      diameter_ = std::max(diameter_, std::abs(pts[i] - pts[j]));
    }
  }
}

bool Domain::contains(cplx z) const {
  if (outer().winding_number(z) != 1) return false;
  for (std::size_t q = 0; q < hole_count(); ++q) {
    if (hole_curve(q).winding_number(z) != 0) return false;
  }
  return true;
}

Domain Domain::mapped(cplx a, cplx b) const {
  if (a == 0.0) throw Error(ErrorKind::InvalidArgument, "affine map must be invertible");
  std::vector<Hole> holes;
  for (std::size_t q = 0; q < hole_count(); ++q) {
    holes.push_back({hole_curve(q).mapped(a, b), a * anchor(q) + b});
  }
  return Domain(outer().mapped(a, b), std::move(holes));
}

Domain make_disk(cplx center, double radius, int nodes) {
  return Domain(BoundaryCurve::circle(center, radius, true, nodes));
}

Domain make_annulus(cplx center, double inner_radius, double outer_radius, int nodes) {
  if (!(inner_radius > 0.0 && inner_radius < outer_radius)) {
    throw Error(ErrorKind::InvalidArgument, "annulus needs 0 < inner radius < outer radius");
  }
  std::vector<Hole> holes{{BoundaryCurve::circle(center, inner_radius, false, nodes), center}};
  return Domain(BoundaryCurve::circle(center, outer_radius, true, nodes), std::move(holes));
}

BoundaryPoint nearest_boundary_point(const Domain& domain, cplx z) {
  BoundaryPoint best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < domain.curve_count(); ++i) {
    const CurvePoint cp = domain.curve(i).nearest(z);
    if (cp.distance < best.distance) {
      best.curve = i;
      best.parameter = cp.parameter;
      best.point = cp.point;
      best.distance = cp.distance;
    }
  }
  best.normal = domain.curve(best.curve).outward_normal(best.parameter);
  return best;
}

double signed_distance(const Domain& domain, cplx z) {
  const BoundaryPoint bp = nearest_boundary_point(domain, z);
  if (bp.distance == 0.0) return 0.0;
  bool outside;
  if (bp.distance > 0.5 * domain.curve(bp.curve).max_node_spacing()) {
    outside = !domain.contains(z);
  } else {
    outside = std::real(std::conj(z - bp.point) * bp.normal) > 0.0;
  }
  return outside ? bp.distance : -bp.distance;
}

bool strictly_inside(const Domain& domain, cplx z) {
  return signed_distance(domain, z) < -domain.boundary_band();
}

DefiningFunctionPatch::DefiningFunctionPatch(cplx p, std::function<double(cplx)> psi,
                                             cplx gradient)
    : point_(p), psi_(std::move(psi)), gradient_(gradient) {
  if (!(std::abs(gradient_) > 0.0) || !std::isfinite(std::abs(gradient_))) {
    throw Error(ErrorKind::DegenerateGradient, "defining function gradient vanishes at p");
  }
  const double scale = std::max(1.0, std::abs(p));
  if (std::abs(psi_(p)) > 1e-8 * scale) {
    throw Error(ErrorKind::InvalidArgument, "defining function does not vanish at p");
  }
  const double eps = 1e-6 * scale / std::abs(gradient_);
  if (!(psi_(p - eps * gradient_ / std::abs(gradient_)) < 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "defining function is not negative inside near p");
  }
}

DefiningFunctionPatch DefiningFunctionPatch::signed_distance(const Domain& domain, cplx p) {
  const BoundaryPoint bp = nearest_boundary_point(domain, p);
  if (bp.distance > 1e-6 * domain.diameter()) {
    throw Error(ErrorKind::InvalidArgument, "point is not on the boundary");
  }
  auto shared = std::make_shared<const Domain>(domain);
  return DefiningFunctionPatch(
      bp.point, [shared](cplx z) { return spanlab::signed_distance(*shared, z); }, bp.normal);
}

DefiningFunctionPatch DefiningFunctionPatch::from_function(cplx p, std::function<double(cplx)> psi,
                                                           double h) {
  const double gx = (psi(p + h) - psi(p - h)) / (2.0 * h);
  const double gy = (psi(p + cplx(0.0, h)) - psi(p - cplx(0.0, h))) / (2.0 * h);
  return DefiningFunctionPatch(p, std::move(psi), cplx(gx, gy));
}

AffineScalingMap scaling_map(const Domain& domain, const DefiningFunctionPatch& patch, cplx p_n) {
  const double psi = patch(p_n);
  if (!(psi < 0.0) || !domain.contains(p_n)) {
    throw Error(ErrorKind::NotInterior, "scaling center must satisfy psi(p_n) < 0");
  }
  return AffineScalingMap{p_n, -psi};
}

Domain scaled_domain(const Domain& domain, const AffineScalingMap& map) {
  if (!(map.scale > 0.0)) throw Error(ErrorKind::InvalidArgument, "scale must be positive");
  return domain.mapped(1.0 / map.scale, -map.center / map.scale);
}

HalfPlane limit_halfplane(const DefiningFunctionPatch& patch) {
  if (!(std::abs(patch.gradient()) > 0.0)) {
    throw Error(ErrorKind::DegenerateGradient, "cannot form a half-plane from a zero gradient");
  }
  return HalfPlane{patch.gradient()};
}

namespace {

std::vector<cplx> clip(std::span<const cplx> pts, double radius) {
  std::vector<cplx> out;
  for (const cplx& z : pts) {
    if (std::abs(z) <= radius) out.push_back(z);
  }
  return out;
}

double directed_hausdorff(const std::vector<cplx>& from, const std::vector<cplx>& to) {
  double worst = 0.0;
  for (const cplx& a : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const cplx& b : to) {
      best = std::min(best, std::norm(a - b));
      if (best <= worst) break;
    }
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

}  // namespace

double hausdorff_distance_local(std::span<const cplx> a, std::span<const cplx> b, double radius) {
  const std::vector<cplx> ca = clip(a, radius);
  const std::vector<cplx> cb = clip(b, radius);
  if (ca.empty() || cb.empty()) {
    throw Error(ErrorKind::EmptyClip, "a point set has no samples in the closed ball");
  }
  return std::max(directed_hausdorff(ca, cb), directed_hausdorff(cb, ca));
}

std::vector<cplx> boundary_samples_in_ball(const Domain& domain, double radius, double spacing) {
  std::vector<cplx> out;
  for (std::size_t i = 0; i < domain.curve_count(); ++i) {
    const std::vector<cplx> pts = domain.curve(i).samples_in_ball(0.0, radius, spacing);
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

std::vector<cplx> halfplane_boundary_samples(const HalfPlane& plane, double radius,
                                             double spacing) {
  const double w = std::abs(plane.omega);
  const double offset = 1.0 / w;
  std::vector<cplx> out;
  if (radius < offset) return out;
  const cplx foot = plane.omega / (w * w);
  const cplx along = cplx(0.0, 1.0) * plane.omega / w;
  const double half = std::sqrt(radius * radius - offset * offset);
  const int count = std::max(2, static_cast<int>(std::ceil(2.0 * half / spacing)) + 1);
  for (int i = 0; i < count; ++i) {
    const double s = -half + 2.0 * half * i / (count - 1);
    out.push_back(foot + s * along);
  }
  return out;
}

std::vector<cplx> inner_normal_sequence(const Domain& domain, cplx p,
                                        std::span<const double> steps) {
  const BoundaryPoint bp = nearest_boundary_point(domain, p);
  if (bp.distance > 1e-6 * domain.diameter()) {
    throw Error(ErrorKind::InvalidArgument, "approach point is not on the boundary");
  }
  std::vector<cplx> out;
  for (std::size_t j = 0; j < steps.size(); ++j) {
    if (!(steps[j] > 0.0) || (j > 0 && !(steps[j] < steps[j - 1]))) {
      throw Error(ErrorKind::InvalidArgument, "steps must be positive and strictly decreasing");
    }
    const cplx q = bp.point - steps[j] * bp.normal;
    if (!strictly_inside(domain, q)) {
      throw Error(ErrorKind::StepLeavesDomain, "inner normal step leaves the domain");
    }
    out.push_back(q);
  }
  return out;
}

std::vector<double> geometric_steps(double t0, double ratio, int count) {
  if (!(t0 > 0.0) || !(ratio > 0.0 && ratio < 1.0) || count < 1) {
    throw Error(ErrorKind::InvalidArgument, "geometric steps need t0 > 0, 0 < ratio < 1");
  }
  std::vector<double> out(count);
  for (int j = 0; j < count; ++j) out[j] = t0 * std::pow(ratio, j);
  return out;
}

}  // namespace spanlab
