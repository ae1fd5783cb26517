#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spanlab/domain.hpp"
#include "spanlab/domain_io.hpp"
#include "spanlab/error.hpp"
#include "helpers.hpp"

using namespace spanlab;

namespace {

std::vector<cplx> circle_samples(double r, int n) {
  std::vector<cplx> out;
  for (int i = 0; i < n; ++i) out.push_back(std::polar(r, 2.0 * std::numbers::pi * i / n));
  return out;
}

}  // namespace

TEST_CASE("curve construction and invariants") {
  const BoundaryCurve c = BoundaryCurve::circle(cplx(1.0, 2.0), 3.0, true);
  CHECK(c.counterclockwise());
  CHECK(c.signed_area() == doctest::Approx(9.0 * std::numbers::pi));
  CHECK(c.length() == doctest::Approx(6.0 * std::numbers::pi));
  cplx center;
  double radius = 0.0;
  CHECK(c.is_circle(&center, &radius));
  CHECK(radius == doctest::Approx(3.0));
  CHECK(!c.reversed().counterclockwise());

  const BoundaryCurve e = BoundaryCurve::ellipse(0.0, 2.0, 1.0, 0.3);
  CHECK(e.signed_area() == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(!e.is_circle());

  // z(t) = e^{it} + e^{-2it}... a curve that crosses itself
  const std::vector<std::pair<int, cplx>> modes{{1, 1.0}, {3, 1.0}};
  CHECK(throws_kind(ErrorKind::InvalidDomain, [&] { BoundaryCurve::from_modes(modes); }));
  CHECK(throws_kind(ErrorKind::InvalidArgument, [] { BoundaryCurve({1.0, 2.0}); }));

  const std::vector<cplx> square{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  const BoundaryCurve sq = BoundaryCurve::smoothed_polygon(square, 32);
  CHECK(sq.signed_area() == doctest::Approx(4.0).epsilon(0.05));
  CHECK(sq.winding_number(0.0) == 1);
  CHECK(sq.winding_number(3.0) == 0);
}

TEST_CASE("nearest point on a curve") {
  const BoundaryCurve e = BoundaryCurve::ellipse(0.0, 2.0, 1.0, 0.0);
  const CurvePoint p = e.nearest(cplx(0.0, 3.0));
  CHECK(p.distance == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(p.point - cplx(0.0, 1.0)) < 1e-10);
}

TEST_CASE("domain validation") {
  const BoundaryCurve outer = BoundaryCurve::circle(0.0, 1.0, true);
  CHECK(throws_kind(ErrorKind::InvalidDomain, [&] {
    Domain(outer, {{BoundaryCurve::circle(2.0, 0.2, false), 2.0}});
  }));
  CHECK(throws_kind(ErrorKind::InvalidDomain, [&] {
    Domain(outer, {{BoundaryCurve::circle(0.0, 0.5, false), 0.7}});
  }));
  CHECK(throws_kind(ErrorKind::InvalidDomain, [&] {
    Domain(outer, {{BoundaryCurve::circle(0.2, 0.3, false), 0.2},
                   {BoundaryCurve::circle(-0.2, 0.3, false), -0.2}});
  }));
  // orientation is normalized
  const Domain d(outer.reversed(), {{BoundaryCurve::circle(0.0, 0.5, true), 0.0}});
  CHECK(d.outer().counterclockwise());
  CHECK(!d.hole_curve(0).counterclockwise());
  CHECK(d.diameter() == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("signed distance examples") {
  const Domain disk = make_disk(0.0, 1.0);
  CHECK(signed_distance(disk, 0.0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(signed_distance(disk, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  const Domain ann = make_annulus(0.0, 0.5, 1.0);
  CHECK(signed_distance(ann, 0.6) == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK(signed_distance(ann, 0.2) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(std::abs(signed_distance(disk, std::polar(1.0, 0.3))) < 1e-12);
}

TEST_CASE("signed distance is 1-Lipschitz") {
  const Domain d(BoundaryCurve::ellipse(0.0, 1.5, 1.0, 0.2),
                 {{BoundaryCurve::circle(cplx(0.3, 0.1), 0.3, false), cplx(0.3, 0.1)}});
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const cplx a(u(rng), u(rng));
    const cplx b = a + cplx(0.05 * u(rng), 0.05 * u(rng));
    CHECK(std::abs(signed_distance(d, a) - signed_distance(d, b)) <= std::abs(a - b) + 1e-12);
  }
}

TEST_CASE("scaling maps") {
  const Domain disk = make_disk(0.0, 1.0);
  const auto patch = DefiningFunctionPatch::signed_distance(disk, 1.0);
  const AffineScalingMap t = scaling_map(disk, patch, 0.9);
  CHECK(std::abs(t(0.9)) < 1e-15);
  CHECK(t.scale == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(t(1.0).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(t.inverse(t(cplx(0.3, 0.4))) - cplx(0.3, 0.4)) < 1e-15);

  const double eps = 0.01;
  const AffineScalingMap te = scaling_map(disk, patch, 1.0 - eps);
  const Domain scaled = scaled_domain(disk, te);
  cplx c;
  double r = 0.0;
  REQUIRE(scaled.outer().is_circle(&c, &r));
  CHECK(r == doctest::Approx(1.0 / eps).epsilon(1e-9));
  CHECK(c.real() == doctest::Approx(-(1.0 - eps) / eps).epsilon(1e-9));
  CHECK(std::abs(c + r - 1.0) < 1e-9);
  CHECK(scaled.outer().nodes() == disk.outer().nodes());

  for (int i = 0; i < scaled.outer().nodes(); ++i) {
    const cplx back = te.inverse(scaled.outer().samples()[i]);
    CHECK(std::abs(back - disk.outer().samples()[i]) < 1e-13);
  }
  const Domain same = scaled_domain(disk, AffineScalingMap{0.0, 1.0});
  CHECK(std::abs(same.outer().samples()[5] - disk.outer().samples()[5]) == 0.0);

  CHECK(throws_kind(ErrorKind::NotInterior, [&] { scaling_map(disk, patch, 1.2); }));
}

TEST_CASE("scaled annulus keeps its anchor") {
  const Domain ann = make_annulus(0.0, 0.5, 1.0);
  const AffineScalingMap t{0.9, 0.1};
  const Domain s = scaled_domain(ann, t);
  CHECK(std::abs(s.anchor(0) - t(0.0)) < 1e-12);
}

TEST_CASE("limit half-plane") {
  // psi = |z|^2 - 1 at p = 1 has gradient 2
  const auto quad = DefiningFunctionPatch::from_function(1.0, [](cplx z) { return std::norm(z) - 1.0; });
  CHECK(std::abs(quad.gradient() - 2.0) < 1e-8);
  const HalfPlane h = limit_halfplane(quad);
  CHECK(h.contains(0.49));
  CHECK(!h.contains(0.51));
  CHECK(h.distance_to_boundary(0.0) == doctest::Approx(0.5));
  CHECK(h.defining_function(0.0) == -1.0);

  const auto sd = DefiningFunctionPatch::signed_distance(make_disk(0.0, 1.0), 1.0);
  CHECK(std::abs(sd.gradient() - 1.0) < 1e-12);
  CHECK(limit_halfplane(sd).distance_to_boundary(0.0) == doctest::Approx(1.0));

  CHECK(throws_kind(ErrorKind::DegenerateGradient, [] {
    DefiningFunctionPatch(1.0, [](cplx) { return 0.0; }, 0.0);
  }));
}

TEST_CASE("local Hausdorff distance") {
  const std::vector<cplx> a{0.0}, b{3.0};
  CHECK(hausdorff_distance_local(a, b, 10.0) == doctest::Approx(3.0));
  CHECK(hausdorff_distance_local(a, a, 10.0) == 0.0);
  const auto c1 = circle_samples(1.0, 2000);
  const auto c2 = circle_samples(1.1, 2000);
  CHECK(hausdorff_distance_local(c1, c2, 10.0) == doctest::Approx(0.1).epsilon(1e-3));
  CHECK(hausdorff_distance_local(c1, c2, 10.0) == hausdorff_distance_local(c2, c1, 10.0));
  CHECK(throws_kind(ErrorKind::EmptyClip, [&] { hausdorff_distance_local(a, b, 1.0); }));
  // triangle inequality
  const auto c3 = circle_samples(1.25, 2000);
  CHECK(hausdorff_distance_local(c1, c3, 10.0) <=
        hausdorff_distance_local(c1, c2, 10.0) + hausdorff_distance_local(c2, c3, 10.0) + 1e-12);
}

TEST_CASE("scaled boundaries approach the half-plane") {
  const Domain ann = make_annulus(0.0, 0.5, 1.0);
  const auto patch = DefiningFunctionPatch::signed_distance(ann, 1.0);
  const HalfPlane h = limit_halfplane(patch);
  const auto line = halfplane_boundary_samples(h, 2.0, 1e-3);
  double previous = 0.0;
  for (int j = 0; j < 5; ++j) {
    const double t = 0.1 * std::pow(0.5, j);
    const Domain s = scaled_domain(ann, scaling_map(ann, patch, 1.0 - t));
    const double d = hausdorff_distance_local(boundary_samples_in_ball(s, 2.0, 1e-3), line, 2.0);
    if (j > 0) CHECK(d <= previous);
    if (j > 0) CHECK(d >= previous / 4.0);
    previous = d;
  }
  CHECK(previous < 0.02);
}

TEST_CASE("inner normal sequences") {
  const Domain disk = make_disk(0.0, 1.0);
  const std::vector<double> t1{0.1};
  CHECK(std::abs(inner_normal_sequence(disk, 1.0, t1)[0] - 0.9) < 1e-12);
  const std::vector<double> t2{0.2};
  CHECK(std::abs(inner_normal_sequence(disk, cplx(0.0, 1.0), t2)[0] - cplx(0.0, 0.8)) < 1e-12);
  const Domain ann = make_annulus(0.0, 0.5, 1.0);
  const std::vector<double> t3{0.25};
  CHECK(std::abs(inner_normal_sequence(ann, 1.0, t3)[0] - 0.75) < 1e-12);
  const std::vector<double> far{0.6};
  CHECK(throws_kind(ErrorKind::StepLeavesDomain, [&] { inner_normal_sequence(ann, 1.0, far); }));
  const std::vector<double> bad{0.1, 0.2};
  CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { inner_normal_sequence(ann, 1.0, bad); }));
  const auto g = geometric_steps(0.1, 0.5, 10);
  CHECK(g.size() == 10);
  CHECK(g[9] == doctest::Approx(0.1 / 512.0));
}

TEST_CASE("domain description parsing") {
  using nlohmann::json;
  const Domain a = parse_domain(json::parse(
      R"({"type": "annulus", "center": [0, 0], "inner_radius": 0.5, "outer_radius": 1})"));
  CHECK(a.hole_count() == 1);
  const Domain e = parse_domain(json::parse(
      R"({"type": "ellipse", "semi_axes": [1.5, 1], "rotation": 0.2,
          "holes": [{"type": "disk", "center": [0.3, 0.1], "radius": 0.3}], "nodes": 256})"));
  CHECK(e.outer().nodes() == 256);
  CHECK(std::abs(e.anchor(0) - cplx(0.3, 0.1)) < 1e-12);
  const Domain f = parse_domain(json::parse(
      R"({"type": "fourier", "coefficients": [[0, 0, 0], [1, 1, 0], [-1, 0.1, 0]]})"));
  CHECK(f.outer().degree() == 1);
  const Domain p = parse_domain(json::parse(
      R"({"type": "polygon-smoothed", "vertices": [[-1,-1],[1,-1],[1,1],[-1,1]], "modes": 24})"));
  CHECK(p.contains(0.0));
  CHECK(throws_kind(ErrorKind::Config, [] {
    parse_domain(json::parse(R"({"type": "disk", "radius": 1, "colour": "red"})"));
  }));
  CHECK(throws_kind(ErrorKind::Config, [] { parse_domain(json::parse(R"({"type": "blob"})")); }));
  CHECK(throws_kind(ErrorKind::Config, [] { parse_domain(json::parse(R"({"type": "disk"})")); }));
}
