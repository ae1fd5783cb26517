#pragma once

#include "spanlab/curve.hpp"

namespace spanlab::reference {

/// Reduced Bergman kernel of the unit disk, 1 / (pi (1 - z conj(zeta))^2).
cplx disk_kernel(cplx z, cplx zeta);
/// Same for the disk |z - center| < radius.
cplx disk_kernel(cplx center, double radius, cplx z, cplx zeta);
/// 1 / (1 - |z|^2)^2
double disk_metric(cplx z);
double disk_metric(cplx center, double radius, cplx z);

/// Half-plane {Re(conj(omega) z) < 1}: s = 1 / (4 dist(z, boundary)^2).
double halfplane_metric(cplx omega, cplx z);
/// |omega|^2 / (pi (2 - conj(omega) z - omega conj(zeta))^2)
cplx halfplane_kernel(cplx omega, cplx z, cplx zeta);
/// 1 / (4 (Im z)^2)
double upper_halfplane_metric(cplx z);

/// Moebius map of the unit disk onto {Re(conj(omega) z) < 1} with 0 -> 0,
/// xi -> 2 xi / (conj(omega) (1 + xi)), and its derivative.
cplx disk_to_halfplane(cplx omega, cplx xi);
cplx disk_to_halfplane_derivative(cplx omega, cplx xi);

/// First-power density |r + z||r - z| / (Im z (r^2 - |z|^2)) on the upper half-disk.
double halfdisk_density(double r, cplx z);
/// Squared-convention metric halfdisk_density^2 / 4.
double halfdisk_metric(double r, cplx z);
/// (1/Im z) / halfdisk_density = (r^2 - |z|^2) / (|r + z||r - z|)
double halfdisk_ratio(double r, cplx z);

/// g(z) = i (1 - z) / (1 + z)
cplx cayley_map(cplx z);
cplx cayley_derivative(cplx z);
/// 1 / (z - a)
cplx inversion(cplx a, cplx z);
/// e^{i theta} (z - a) / (1 - conj(a) z), |a| < 1
cplx disk_automorphism(cplx a, double theta, cplx z);
cplx disk_automorphism_derivative(cplx a, double theta, cplx z);

/// Metric of the intersection of two properly intersecting open disks,
/// through the Moebius map (z - A)/(z - B) onto a sector of angle alpha
/// (A, B the corner points) followed by w -> w^{pi/alpha}.
class LuneMetric {
 public:
  LuneMetric(cplx c1, double r1, cplx c2, double r2);

  bool contains(cplx z) const;
  double operator()(cplx z) const;
  double angle() const { return alpha_; }
  cplx corner_a() const { return a_; }
  cplx corner_b() const { return b_; }

 private:
  cplx c1_, c2_;
  double r1_, r2_;
  cplx a_, b_;
  double start_ = 0.0;
  double alpha_ = 0.0;
};

/// Tagged closed-form metric used as an oracle or a limit target.
struct ClosedFormMetric {
  enum class Kind { Disk, UpperHalfPlane, HalfPlane, HalfDisk };

  Kind kind = Kind::Disk;
  cplx center = 0.0;
  double radius = 1.0;
  cplx omega = 1.0;

  static ClosedFormMetric disk(cplx center, double radius);
  static ClosedFormMetric upper_halfplane();
  static ClosedFormMetric halfplane(cplx omega);
  static ClosedFormMetric halfdisk(double radius);

  bool contains(cplx z) const;
  double metric(cplx z) const;
  /// Throws InvalidArgument for the half-disk (no closed-form kernel).
  cplx kernel(cplx z, cplx zeta) const;
};

}  // namespace spanlab::reference
