#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spanlab/curvature.hpp"
#include "spanlab/dirichlet.hpp"
#include "spanlab/error.hpp"
#include "spanlab/lab.hpp"
#include "spanlab/reference.hpp"

namespace {

using spanlab::cplx;
namespace ref = spanlab::reference;

struct Check {
  std::string name;
  double value;
  double expected;
  double tolerance;
};

std::vector<Check> oracle_checks(const std::string& which) {
  const double pi = std::numbers::pi;
  std::vector<Check> out;
  const bool all = which == "all";
  if (all || which == "disk") {
    out.push_back({"disk metric at 0", ref::disk_metric(0.0), 1.0, 1e-15});
    out.push_back({"disk metric at 1/2", ref::disk_metric(0.5), 16.0 / 9.0, 1e-15});
    out.push_back({"pi * disk kernel at (0,0)", pi * ref::disk_kernel(0.0, 0.0).real(), 1.0, 1e-15});
    out.push_back({"pi * disk kernel at (1/2,1/2)", pi * ref::disk_kernel(0.5, 0.5).real(),
                   16.0 / 9.0, 1e-14});
  }
  if (all || which == "halfplane") {
    out.push_back({"half-plane metric, omega=1, z=0", ref::halfplane_metric(1.0, 0.0), 0.25, 1e-15});
    out.push_back({"half-plane metric, omega=2, z=0", ref::halfplane_metric(2.0, 0.0), 1.0, 1e-15});
    const cplx xi(0.3, -0.4);
    const cplx omega(0.6, 0.8);
    const double pulled = ref::halfplane_metric(omega, ref::disk_to_halfplane(omega, xi)) *
                          std::norm(ref::disk_to_halfplane_derivative(omega, xi));
    out.push_back({"half-plane pullback to the disk", pulled, ref::disk_metric(xi), 1e-12});
  }
  if (all || which == "halfdisk") {
    out.push_back({"half-disk density at i/2 (r=1)", ref::halfdisk_density(1.0, cplx(0.0, 0.5)),
                   10.0 / 3.0, 1e-14});
    out.push_back({"half-disk ratio at 1e-3 i", ref::halfdisk_ratio(1.0, cplx(0.0, 1e-3)), 1.0,
                   1e-3});
  }
  if (all || which == "cayley") {
    out.push_back({"|g(1)|", std::abs(ref::cayley_map(1.0)), 0.0, 1e-15});
    out.push_back({"Im g(0)", ref::cayley_map(0.0).imag(), 1.0, 1e-15});
    out.push_back({"inversion(0, 2)", ref::inversion(0.0, 2.0).real(), 0.5, 1e-15});
  }
  if (all || which == "curvature") {
    out.push_back({"bound n=1", spanlab::burbea_bound(1), -4.0, 0.0});
    out.push_back({"bound n=2", spanlab::burbea_bound(2), -144.0, 0.0});
    const spanlab::KernelModel m =
        spanlab::build_model(spanlab::make_disk(0.0, 1.0), spanlab::BasisDegrees{8, {}});
    out.push_back({"disk model kappa1 at 0", spanlab::higher_order_curvature(m, 0.0, 1), -4.0,
                   4e-9});
    out.push_back({"disk model kappa2 at 0", spanlab::higher_order_curvature(m, 0.0, 2), -144.0,
                   144e-9});
  }
  if (out.empty()) {
    throw spanlab::Error(spanlab::ErrorKind::InvalidArgument,
                         "unknown oracle '" + which +
                             "' (disk, halfplane, halfdisk, cayley, curvature, all)");
  }
  return out;
}

int run_oracle(const std::string& which) {
  bool ok = true;
  for (const Check& c : oracle_checks(which)) {
    const bool pass = std::abs(c.value - c.expected) <= c.tolerance;
    ok = ok && pass;
    std::printf("%-36s value=%.17g expected=%.17g %s\n", c.name.c_str(), c.value, c.expected,
                pass ? "ok" : "FAIL");
  }
  return ok ? 0 : 1;
}

int run_config(const std::string& path, const std::string& out_dir) {
  spanlab::ExperimentConfig cfg = spanlab::load_config(path);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  spanlab::validate_config(cfg);
  bool ok = true;
  for (const spanlab::ExperimentResult& r : spanlab::run_experiments(cfg)) {
    for (const auto& p : spanlab::emit(r, cfg.output_dir, cfg.svg)) {
      std::printf("wrote %s\n", p.string().c_str());
    }
    for (const auto& w : r.warnings) std::printf("warning: %s\n", w.c_str());
    for (const spanlab::Gate& g : r.gates) {
      std::printf("%s %s/%s: %s\n", g.passed ? "PASS" : "FAIL", spanlab::to_string(r.kind),
                  g.name.c_str(), g.detail.c_str());
      ok = ok && g.passed;
    }
  }
  return ok ? 0 : 1;
}

int run_validate(const std::string& path) {
  const spanlab::ExperimentConfig cfg = spanlab::load_config(path);
  spanlab::validate_config(cfg);
  std::printf("%s: valid (%zu steps, %zu experiments)\n", path.c_str(), cfg.steps.size(),
              cfg.experiments.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"span metric and curvature laboratory"};
  app.require_subcommand(1);
  std::string config_path, oracle_name, out_dir;
  auto* run = app.add_subcommand("run", "run the experiments of a config file");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("-o,--out", out_dir, "output directory, overrides the config");
  auto* oracle = app.add_subcommand("oracle", "print closed-form checks");
  oracle->add_option("name", oracle_name, "disk, halfplane, halfdisk, cayley, curvature or all")
      ->required();
  auto* validate = app.add_subcommand("validate", "check a config file without running it");
  validate->add_option("config", config_path, "config file")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_config(config_path, out_dir);
    if (*oracle) return run_oracle(oracle_name);
    if (*validate) return run_validate(config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "spanlab: %s\n", e.what());
    return 2;
  }
  return 2;
}
