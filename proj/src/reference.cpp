#include "spanlab/reference.hpp"

#include <cmath>
#include <numbers>

#include "spanlab/error.hpp"

namespace spanlab::reference {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

double wrap(double a) {
  a = std::fmod(a, 2.0 * kPi);
  return a < 0.0 ? a + 2.0 * kPi : a;
}

}  // namespace

cplx disk_kernel(cplx z, cplx zeta) {
  require(std::abs(z) < 1.0 && std::abs(zeta) < 1.0, "point outside the unit disk");
  const cplx d = 1.0 - z * std::conj(zeta);
  return 1.0 / (kPi * d * d);
}

cplx disk_kernel(cplx center, double radius, cplx z, cplx zeta) {
  require(radius > 0.0, "radius must be positive");
  require(std::abs(z - center) < radius && std::abs(zeta - center) < radius,
          "point outside the disk");
  const cplx d = radius * radius - (z - center) * std::conj(zeta - center);
  return radius * radius / (kPi * d * d);
}

double disk_metric(cplx z) {
  require(std::abs(z) < 1.0, "point outside the unit disk");
  const double d = 1.0 - std::norm(z);
  return 1.0 / (d * d);
}

double disk_metric(cplx center, double radius, cplx z) {
  require(radius > 0.0, "radius must be positive");
  require(std::abs(z - center) < radius, "point outside the disk");
  const double d = radius * radius - std::norm(z - center);
  return radius * radius / (d * d);
}

double halfplane_metric(cplx omega, cplx z) {
  require(std::abs(omega) > 0.0, "omega must be nonzero");
  const double d = (1.0 - std::real(std::conj(omega) * z)) / std::abs(omega);
  require(d > 0.0, "point outside the half-plane");
  return 1.0 / (4.0 * d * d);
}

cplx halfplane_kernel(cplx omega, cplx z, cplx zeta) {
  require(std::abs(omega) > 0.0, "omega must be nonzero");
  require(std::real(std::conj(omega) * z) < 1.0 && std::real(std::conj(omega) * zeta) < 1.0,
          "point outside the half-plane");
  const cplx d = 2.0 - std::conj(omega) * z - omega * std::conj(zeta);
  return std::norm(omega) / (kPi * d * d);
}

double upper_halfplane_metric(cplx z) {
  require(z.imag() > 0.0, "point outside the upper half-plane");
  return 1.0 / (4.0 * z.imag() * z.imag());
}

cplx disk_to_halfplane(cplx omega, cplx xi) {
  require(std::abs(omega) > 0.0, "omega must be nonzero");
  require(xi != -1.0, "pole at -1");
  return 2.0 * xi / (std::conj(omega) * (1.0 + xi));
}

cplx disk_to_halfplane_derivative(cplx omega, cplx xi) {
  require(std::abs(omega) > 0.0, "omega must be nonzero");
  require(xi != -1.0, "pole at -1");
  return 2.0 / (std::conj(omega) * (1.0 + xi) * (1.0 + xi));
}

double halfdisk_density(double r, cplx z) {
  require(r > 0.0, "radius must be positive");
  require(z.imag() > 0.0 && std::abs(z) < r, "point outside the half-disk");
  return std::abs(r + z) * std::abs(r - z) / (z.imag() * (r * r - std::norm(z)));
}

double halfdisk_metric(double r, cplx z) {
  const double l = halfdisk_density(r, z);
  return 0.25 * l * l;
}

double halfdisk_ratio(double r, cplx z) {
  require(r > 0.0, "radius must be positive");
  require(z.imag() > 0.0 && std::abs(z) < r, "point outside the half-disk");
  return (r * r - std::norm(z)) / (std::abs(r + z) * std::abs(r - z));
}

cplx cayley_map(cplx z) {
  require(z != -1.0, "pole at -1");
  return cplx(0.0, 1.0) * (1.0 - z) / (1.0 + z);
}

cplx cayley_derivative(cplx z) {
  require(z != -1.0, "pole at -1");
  return cplx(0.0, -2.0) / ((1.0 + z) * (1.0 + z));
}

cplx inversion(cplx a, cplx z) {
  require(z != a, "pole at a");
  return 1.0 / (z - a);
}

cplx disk_automorphism(cplx a, double theta, cplx z) {
  require(std::abs(a) < 1.0, "automorphism parameter must lie in the unit disk");
  return std::polar(1.0, theta) * (z - a) / (1.0 - std::conj(a) * z);
}

cplx disk_automorphism_derivative(cplx a, double theta, cplx z) {
  require(std::abs(a) < 1.0, "automorphism parameter must lie in the unit disk");
  const cplx d = 1.0 - std::conj(a) * z;
  return std::polar(1.0, theta) * (1.0 - std::norm(a)) / (d * d);
}

LuneMetric::LuneMetric(cplx c1, double r1, cplx c2, double r2)
    : c1_(c1), c2_(c2), r1_(r1), r2_(r2) {
  require(r1 > 0.0 && r2 > 0.0, "radii must be positive");
  const double d = std::abs(c2 - c1);
  require(d < r1 + r2 && d > std::abs(r1 - r2), "disks do not intersect properly");
  const double x = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
  const double h = std::sqrt(r1 * r1 - x * x);
  const cplx e = (c2 - c1) / d;
  a_ = c1 + x * e + cplx(0.0, h) * e;
  b_ = c1 + x * e - cplx(0.0, h) * e;

  auto m = [&](cplx z) { return (z - a_) / (z - b_); };
  const cplx on1 = c1 + r1 * e;
  const cplx on2 = c2 - r2 * e;
  const double t1 = std::arg(m(on1));
  const double t2 = std::arg(m(on2));
  const double inside = std::arg(m(0.5 * (on1 + on2)));
  start_ = t1;
  alpha_ = wrap(t2 - t1);
  if (!(wrap(inside - t1) < alpha_)) {
    start_ = t2;
    alpha_ = 2.0 * kPi - alpha_;
  }
}

bool LuneMetric::contains(cplx z) const {
  return std::abs(z - c1_) < r1_ && std::abs(z - c2_) < r2_;
}

double LuneMetric::operator()(cplx z) const {
  require(contains(z), "point outside the lune");
  const cplx w = (z - a_) / (z - b_);
  const cplx dw = (a_ - b_) / ((z - b_) * (z - b_));
  const double phi = wrap(std::arg(w) - start_);
  const double k = kPi / alpha_;
  const double s = std::sin(k * phi);
  return k * k * std::norm(dw) / (4.0 * std::norm(w) * s * s);
}

ClosedFormMetric ClosedFormMetric::disk(cplx center, double radius) {
  require(radius > 0.0, "radius must be positive");
  ClosedFormMetric m;
  m.kind = Kind::Disk;
  m.center = center;
  m.radius = radius;
  return m;
}

ClosedFormMetric ClosedFormMetric::upper_halfplane() {
  ClosedFormMetric m;
  m.kind = Kind::UpperHalfPlane;
  return m;
}

ClosedFormMetric ClosedFormMetric::halfplane(cplx omega) {
  require(std::abs(omega) > 0.0, "omega must be nonzero");
  ClosedFormMetric m;
  m.kind = Kind::HalfPlane;
  m.omega = omega;
  return m;
}

ClosedFormMetric ClosedFormMetric::halfdisk(double radius) {
  require(radius > 0.0, "radius must be positive");
  ClosedFormMetric m;
  m.kind = Kind::HalfDisk;
  m.radius = radius;
  return m;
}

bool ClosedFormMetric::contains(cplx z) const {
  switch (kind) {
    case Kind::Disk: return std::abs(z - center) < radius;
    case Kind::UpperHalfPlane: return z.imag() > 0.0;
    case Kind::HalfPlane: return std::real(std::conj(omega) * z) < 1.0;
    case Kind::HalfDisk: return z.imag() > 0.0 && std::abs(z) < radius;
  }
  return false;
}

double ClosedFormMetric::metric(cplx z) const {
  switch (kind) {
    case Kind::Disk: return disk_metric(center, radius, z);
    case Kind::UpperHalfPlane: return upper_halfplane_metric(z);
    case Kind::HalfPlane: return halfplane_metric(omega, z);
    case Kind::HalfDisk: return halfdisk_metric(radius, z);
  }
  return 0.0;
}

cplx ClosedFormMetric::kernel(cplx z, cplx zeta) const {
  switch (kind) {
    case Kind::Disk: return disk_kernel(center, radius, z, zeta);
    case Kind::UpperHalfPlane: {
      require(z.imag() > 0.0 && zeta.imag() > 0.0, "point outside the upper half-plane");
      const cplx d = z - std::conj(zeta);
      return -1.0 / (kPi * d * d);
    }
    case Kind::HalfPlane: return halfplane_kernel(omega, z, zeta);
    case Kind::HalfDisk: break;
  }
  throw Error(ErrorKind::InvalidArgument, "no closed-form kernel for the half-disk");
}

}  // namespace spanlab::reference
