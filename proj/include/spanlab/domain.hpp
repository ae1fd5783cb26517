#pragma once

#include <functional>
#include <span>
#include <vector>

#include "spanlab/curve.hpp"

namespace spanlab {

struct Hole {
  BoundaryCurve curve;
  /// Interior point of the complementary component bounded by `curve`.
  cplx anchor;
};

/// Finitely connected planar domain: one outer curve (counterclockwise)
/// and zero or more hole curves (clockwise), each hole with an anchor.
/// Orientations are normalized on construction.
class Domain {
 public:
  explicit Domain(BoundaryCurve outer, std::vector<Hole> holes = {});

  const BoundaryCurve& outer() const { return curves_.front(); }
  std::size_t hole_count() const { return anchors_.size(); }
  const BoundaryCurve& hole_curve(std::size_t q) const { return curves_[q + 1]; }
  cplx anchor(std::size_t q) const { return anchors_[q]; }

  /// Curve 0 is the outer curve; curve q+1 bounds hole q.
  std::size_t curve_count() const { return curves_.size(); }
  const BoundaryCurve& curve(std::size_t i) const { return curves_[i]; }

  double diameter() const { return diameter_; }
  /// Width of the band around the boundary treated as "on the boundary".
  double boundary_band() const { return 1e-8 * diameter_; }

  /// Topological containment by winding numbers of the sampled curves.
  bool contains(cplx z) const;

  /// Image under z -> a z + b (a != 0).
  Domain mapped(cplx a, cplx b) const;

 private:
  std::vector<BoundaryCurve> curves_;
  std::vector<cplx> anchors_;
  double diameter_ = 0.0;
};

Domain make_disk(cplx center, double radius, int nodes = kDefaultNodes);
Domain make_annulus(cplx center, double inner_radius, double outer_radius,
                    int nodes = kDefaultNodes);

struct BoundaryPoint {
  std::size_t curve = 0;
  double parameter = 0.0;
  cplx point;
  /// Outward unit normal at `point`.
  cplx normal;
  double distance = 0.0;
};

BoundaryPoint nearest_boundary_point(const Domain& domain, cplx z);

/// Signed Euclidean distance to the boundary: negative inside, positive outside.
double signed_distance(const Domain& domain, cplx z);

/// Inside and farther than the boundary band from every curve.
bool strictly_inside(const Domain& domain, cplx z);

/// Local defining function psi near a boundary point p with gradient
/// omega = psi_x(p) + i psi_y(p).
class DefiningFunctionPatch {
 public:
  DefiningFunctionPatch(cplx p, std::function<double(cplx)> psi, cplx gradient);

  /// psi = signed distance; omega is the outward unit normal at p.
  static DefiningFunctionPatch signed_distance(const Domain& domain, cplx p);
  /// Gradient by central differences with step h.
  static DefiningFunctionPatch from_function(cplx p, std::function<double(cplx)> psi,
                                             double h = 1e-6);

  cplx point() const { return point_; }
  cplx gradient() const { return gradient_; }
  double operator()(cplx z) const { return psi_(z); }

 private:
  cplx point_;
  std::function<double(cplx)> psi_;
  cplx gradient_;
};

/// T(z) = (z - center) / scale.
struct AffineScalingMap {
  cplx center;
  double scale = 1.0;

  cplx operator()(cplx z) const { return (z - center) / scale; }
  cplx inverse(cplx w) const { return center + scale * w; }
};

/// Limit half-plane {z : Re(conj(omega) z - 1) < 0}.
struct HalfPlane {
  cplx omega;

  bool contains(cplx z) const { return std::real(std::conj(omega) * z) < 1.0; }
  double distance_to_boundary(cplx z) const {
    return (1.0 - std::real(std::conj(omega) * z)) / std::abs(omega);
  }
  /// psi_inf(z) = -1 + 2 Re((d psi / dz)(p) z) with d psi/dz = conj(omega)/2.
  double defining_function(cplx z) const { return -1.0 + std::real(std::conj(omega) * z); }
};

AffineScalingMap scaling_map(const Domain& domain, const DefiningFunctionPatch& patch, cplx p_n);
Domain scaled_domain(const Domain& domain, const AffineScalingMap& map);
HalfPlane limit_halfplane(const DefiningFunctionPatch& patch);

/// Hausdorff distance between A and B after clipping both to the closed
/// ball |z| <= radius. Throws EmptyClip if either clipped set is empty.
double hausdorff_distance_local(std::span<const cplx> a, std::span<const cplx> b, double radius);

/// Boundary samples of `domain` inside the closed ball |z| <= radius,
/// spaced by at most `spacing`.
std::vector<cplx> boundary_samples_in_ball(const Domain& domain, double radius, double spacing);
/// Samples of the line bounding `plane` inside |z| <= radius.
std::vector<cplx> halfplane_boundary_samples(const HalfPlane& plane, double radius,
                                             double spacing);

/// Points p - t_j nu(p) for the outward normal nu at boundary point p.
/// Steps must be positive and strictly decreasing; every point must be inside.
std::vector<cplx> inner_normal_sequence(const Domain& domain, cplx p,
                                        std::span<const double> steps);

/// Geometric schedule t_j = t0 * ratio^j, j = 0..count-1.
std::vector<double> geometric_steps(double t0, double ratio, int count);

}  // namespace spanlab
