#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spanlab/lab.hpp"
#include "spanlab/reference.hpp"
#include "helpers.hpp"

using namespace spanlab;
using nlohmann::json;

namespace {

json disk_config() {
  return json::parse(R"({
    "name": "disk",
    "domain": {"type": "disk", "center": [0, 0], "radius": 1},
    "boundary_point": [1, 0],
    "steps": {"t0": 0.128, "ratio": 0.5, "count": 8},
    "experiments": ["boundary_metric", "curvature_limit", "scaling_kernel"],
    "curvature_orders": [1, 2],
    "threads": 2
  })");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(disk_config(), "/tmp");
  CHECK(c.name == "disk");
  CHECK(c.steps.size() == 8);
  CHECK(c.steps[1] == doctest::Approx(0.064));
  CHECK(c.experiments.size() == 3);
  CHECK(c.experiments[2] == ExperimentKind::ScalingKernel);
  CHECK(c.curvature_orders == std::vector<int>{1, 2});
  CHECK(c.output_dir == std::filesystem::path("/tmp/spanlab-out"));
  CHECK(c.threads == 2);

  const ExperimentConfig d = parse_config(json::parse(R"({
    "domain": {"type": "annulus", "center": [0, 0], "inner_radius": 0.5, "outer_radius": 1},
    "boundary_point": [1, 0]})"));
  CHECK(d.steps.size() == 10);
  CHECK(d.steps[0] == doctest::Approx(0.1));
  CHECK(d.experiments.size() == 4);

  json explicit_steps = disk_config();
  explicit_steps["steps"] = {0.1, 0.05, 0.01};
  CHECK(parse_config(explicit_steps).steps.size() == 3);
}

TEST_CASE("config rejects bad input") {
  json c = disk_config();
  c["colour"] = "red";
  CHECK(throws_kind(ErrorKind::Config, [&] { parse_config(c); }));
  c = disk_config();
  c["basis"] = {{"outer", 10}, {"degree", 3}};
  CHECK(throws_kind(ErrorKind::Config, [&] { parse_config(c); }));
  c = disk_config();
  c["experiments"] = {"nonsense"};
  CHECK(throws_kind(ErrorKind::Config, [&] { parse_config(c); }));
  c = disk_config();
  c.erase("domain");
  CHECK(throws_kind(ErrorKind::Config, [&] { parse_config(c); }));
  c = disk_config();
  c["steps"] = {0.1, 0.2};
  CHECK_THROWS_AS(parse_config(c), Error);
  c = disk_config();
  c["threads"] = "many";
  CHECK(throws_kind(ErrorKind::Config, [&] { parse_config(c); }));
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(validate_config(parse_config(disk_config())));
  json c = disk_config();
  c["boundary_point"] = {0.5, 0.0};
  CHECK_THROWS_AS(validate_config(parse_config(c)), Error);
  c = disk_config();
  c["steps"] = {3.0, 1.0};
  CHECK_THROWS_AS(validate_config(parse_config(c)), Error);
  c = disk_config();
  c["experiments"] = {"localization"};
  CHECK(throws_kind(ErrorKind::Config, [&] { validate_config(parse_config(c)); }));
}

TEST_CASE("convergence helpers") {
  CHECK(cauchy_ok({1.0, 0.5, 0.25}, 3.0));
  CHECK(cauchy_ok({1.0, 0.5, 0.5}, 3.0));
  CHECK(!cauchy_ok({1.0, 0.9, 0.0}, 3.0));
  std::vector<double> t, g;
  for (int j = 0; j < 6; ++j) {
    t.push_back(std::pow(0.5, j));
    g.push_back(3.0 * t.back() * t.back());
  }
  CHECK(fitted_order(t, g, 4) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("disk experiments") {
  const ExperimentConfig c = parse_config(disk_config());
  const auto results = run_experiments(c);
  REQUIRE(results.size() == 3);
  for (const auto& r : results) {
    CHECK(r.rows.size() == c.steps.size());
    CHECK(r.passed());
    for (const auto& row : r.rows) {
      CHECK(row.size() == r.columns.size());
      for (double v : row) CHECK(std::isfinite(v));
    }
  }
  const auto& b = results[0];
  const auto t = b.values("t");
  const auto v = b.values("s_dist2");
  for (std::size_t j = 0; j < t.size(); ++j) {
    CHECK(v[j] == doctest::Approx(1.0 / ((2.0 - t[j]) * (2.0 - t[j]))).epsilon(1e-8));
  }
  CHECK(b.diagnostic("order") == doctest::Approx(1.0).epsilon(0.05));
  for (const double k : results[1].values("kappa1")) CHECK(k == doctest::Approx(-4.0).epsilon(1e-6));
  for (const double k : results[1].values("kappa2")) CHECK(k == doctest::Approx(-144.0).epsilon(1e-5));
}

TEST_CASE("scaled disk kernel matches the closed form") {
  const Domain disk = make_disk(0.0, 1.0);
  const auto patch = DefiningFunctionPatch::signed_distance(disk, 1.0);
  const AffineScalingMap t = scaling_map(disk, patch, 0.9);
  const Domain s = scaled_domain(disk, t);
  cplx center;
  double radius = 0.0;
  REQUIRE(s.outer().is_circle(&center, &radius));
  const KernelModel m = build_model(s, BasisDegrees{512, {}});
  for (const cplx z : {cplx(0.0, 0.0), cplx(-1.0, 0.5), cplx(0.5, -1.0)}) {
    const cplx zeta(-0.5, 0.2);
    const cplx want = reference::disk_kernel(center, radius, z, zeta);
    CHECK(std::abs(m.kernel(z, zeta) - want) <= 1e-8 * std::abs(want));
  }
}

TEST_CASE("emitted files are deterministic") {
  const auto dir = std::filesystem::temp_directory_path() / "spanlab_emit_test";
  std::filesystem::remove_all(dir);
  json j = disk_config();
  j["experiments"] = {"boundary_metric"};
  const ExperimentConfig c = parse_config(j);
  const auto first = emit(run_experiments(c).front(), dir / "a", true);
  const auto second = emit(run_experiments(c).front(), dir / "b", true);
  REQUIRE(first.size() == 3);
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].filename() == second[i].filename());
    CHECK(slurp(first[i]) == slurp(second[i]));
  }
  const std::string csv = slurp(first[0]);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(c.steps.size() + 1));
  CHECK(csv.rfind("t,dist,s,s_dist2,gap,eps_model\n", 0) == 0);
  const std::string svg = slurp(first[2]);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(std::count(svg.begin(), svg.end(), '<') == std::count(svg.begin(), svg.end(), '>'));
  const json summary = json::parse(slurp(first[1]));
  CHECK(summary["rows"] == c.steps.size());
  CHECK(summary["passed"] == true);
  std::filesystem::remove_all(dir);
}

TEST_CASE("emit refuses non-finite values") {
  ExperimentResult r;
  r.columns = {"t", "x"};
  r.rows = {{0.1, std::nan("")}};
  CHECK_THROWS_AS(emit(r, std::filesystem::temp_directory_path() / "spanlab_nan", false), Error);
}
