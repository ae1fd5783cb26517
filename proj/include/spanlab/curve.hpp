#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace spanlab {

using cplx = std::complex<double>;

inline constexpr int kDefaultNodes = 512;

struct CurvePoint {
  double parameter = 0.0;
  cplx point;
  double distance = 0.0;
};

/// Closed boundary curve stored as a trigonometric polynomial
///
///   gamma(t) = sum_{k=-d}^{d} c_k e^{ikt},  t in [0, 2pi),
///
/// together with M equispaced samples gamma(t_i) and gamma'(t_i).
/// Construction checks that gamma' does not vanish at the nodes and that
/// no two non-adjacent nodes come closer than half the smallest node
/// spacing (simple curve at sample resolution).
class BoundaryCurve {
 public:
  /// `coefficients[k + d]` holds c_k; the length must be odd.
  BoundaryCurve(std::vector<cplx> coefficients, int nodes = kDefaultNodes);

  static BoundaryCurve circle(cplx center, double radius, bool counterclockwise,
                              int nodes = kDefaultNodes);
  static BoundaryCurve ellipse(cplx center, double semi_major, double semi_minor,
                               double rotation, int nodes = kDefaultNodes);
  /// Sparse mode list (k, c_k); missing modes are zero.
  static BoundaryCurve from_modes(std::span<const std::pair<int, cplx>> modes,
                                  int nodes = kDefaultNodes);
  /// Polygon parametrized proportionally to arc length, truncated to
  /// |k| <= modes with Lanczos sigma factors (rounded corners).
  static BoundaryCurve smoothed_polygon(std::span<const cplx> vertices, int modes,
                                        int nodes = kDefaultNodes);

  int degree() const { return degree_; }
  cplx coefficient(int k) const;
  const std::vector<cplx>& coefficients() const { return coef_; }

  int nodes() const { return nodes_; }
  double node_parameter(int i) const;
  std::span<const cplx> samples() const { return samples_; }
  std::span<const cplx> tangents() const { return tangents_; }

  cplx point(double t) const;
  cplx tangent(double t) const;
  cplx acceleration(double t) const;
  /// Unit normal pointing out of the domain the curve bounds, given the
  /// orientation conventions (outer counterclockwise, holes clockwise).
  cplx outward_normal(double t) const;

  /// pi * sum k |c_k|^2; positive for counterclockwise curves.
  double signed_area() const;
  bool counterclockwise() const { return signed_area() > 0.0; }
  double length() const;
  double min_node_spacing() const;
  double max_node_spacing() const;
  /// Mean of the curve, c_0.
  cplx mean() const { return coefficient(0); }
  double max_radius_about(cplx center) const;
  double min_radius_about(cplx center) const;

  /// True when the curve is exactly a circle: only c_0 and one of c_{+1}, c_{-1}.
  bool is_circle(cplx* center = nullptr, double* radius = nullptr) const;

  BoundaryCurve reversed() const;
  /// Image under z -> a z + b.
  BoundaryCurve mapped(cplx a, cplx b) const;
  BoundaryCurve with_nodes(int nodes) const;

  CurvePoint nearest(cplx z) const;
  int winding_number(cplx z) const;

  /// Dense samples with at most `spacing` between consecutive points
  /// (measured with the node-wise speed bound), capped at `max_points`.
  std::vector<cplx> dense_samples(double spacing, std::size_t max_points) const;
  /// Samples with at most `spacing` between neighbours, restricted to the
  /// closed ball |z - center| <= radius. Only node intervals that can reach
  /// the ball are refined.
  std::vector<cplx> samples_in_ball(cplx center, double radius, double spacing) const;

 private:
  void sample();
  double refine_nearest(cplx z, double t0, double half_width) const;

  int degree_ = 0;
  std::vector<cplx> coef_;
  int nodes_ = 0;
  std::vector<cplx> samples_;
  std::vector<cplx> tangents_;
};

}  // namespace spanlab
