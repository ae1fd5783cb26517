#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spanlab/dirichlet.hpp"

namespace spanlab {

enum class ExperimentKind { BoundaryMetric, CurvatureLimit, Localization, ScalingKernel };

const char* to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

struct BasisRule {
  int outer = kDefaultOuterDegree;
  int hole = kDefaultHoleDegree;
  /// Per step, raise each degree to ceil(boundary_factor * rho / dist) where
  /// rho is the basis scale of that curve and dist the smallest distance of
  /// the step's evaluation points to it.
  bool automatic = true;
  double boundary_factor = 24.0;
  int max_degree = 1 << 17;
  /// The coarse comparison model uses degrees scaled by this factor.
  double comparison_fraction = 0.75;
};

struct WindowSpec {
  double radius = 2.0;
  int grid = 5;
  double margin = 0.5;
  double extent = 1.5;
  double spacing = 2e-3;
};

struct Tolerances {
  double metric_gap = 1e-2;
  double metric_order = 0.9;
  double kappa1_gap = 1e-2;
  double kappa_relative_gap = 5e-2;
  double localization_gap = 1e-2;
  double kernel_reduction = 4.0;
  double hausdorff_factor = 2.0;
  double cauchy_factor = 3.0;
  /// Number of trailing steps used for monotonicity and rate fits.
  int tail = 4;
};

struct ExperimentConfig {
  std::string name = "experiment";
  nlohmann::json domain_spec;
  std::shared_ptr<const Domain> domain;
  cplx boundary_point = 1.0;
  std::vector<double> steps;
  std::vector<ExperimentKind> experiments;
  std::vector<int> curvature_orders{1, 2, 3};
  BasisRule basis;
  WindowSpec window;
  Tolerances tolerances;
  std::filesystem::path output_dir = "spanlab-out";
  bool svg = true;
  /// Worker threads for per-step work; 0 means hardware concurrency.
  int threads = 0;
};

/// Config schema:
///
///   {
///     "name": "annulus",
///     "domain": { ...domain schema... },
///     "boundary_point": [1, 0],
///     "steps": {"t0": 0.1, "ratio": 0.5, "count": 10}   or  [t_0, t_1, ...],
///     "experiments": ["boundary_metric", "curvature_limit", "localization",
///                     "scaling_kernel"],
///     "curvature_orders": [1, 2, 3],
///     "basis": {"outer": 24, "hole": 16, "auto": true, "boundary_factor": 24,
///               "max_degree": 131072, "comparison_fraction": 0.75},
///     "window": {"radius": 2, "grid": 5, "margin": 0.5, "extent": 1.5,
///                "spacing": 0.002},
///     "tolerances": {"metric_gap": 0.01, "metric_order": 0.9, "kappa1_gap": 0.01,
///                    "kappa_relative_gap": 0.05, "localization_gap": 0.01,
///                    "kernel_reduction": 4, "hausdorff_factor": 2,
///                    "cauchy_factor": 3, "tail": 4},
///     "output": {"dir": "out", "svg": true},
///     "threads": 0
///   }
///
/// Only "domain" and "boundary_point" are required. Unknown keys are rejected.
/// Relative paths in "output.dir" are taken relative to `base_dir`.
ExperimentConfig parse_config(const nlohmann::json& spec,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Checks that every step point lies strictly inside the domain and that the
/// localization neighborhood is usable when requested. Throws on failure.
void validate_config(const ExperimentConfig& config);

struct Gate {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentResult {
  std::string config_name;
  ExperimentKind kind = ExperimentKind::BoundaryMetric;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, double>> diagnostics;
  std::vector<Gate> gates;
  std::vector<std::string> warnings;

  bool passed() const;
  std::size_t column(const std::string& name) const;
  std::vector<double> values(const std::string& name) const;
  double diagnostic(const std::string& name) const;
};

ExperimentResult experiment_boundary_metric(const ExperimentConfig& config);
ExperimentResult experiment_curvature_limit(const ExperimentConfig& config);
ExperimentResult experiment_localization(const ExperimentConfig& config);
ExperimentResult experiment_scaling_kernel(const ExperimentConfig& config);

/// Runs every configured experiment, sharing per-step models among those
/// that evaluate at the approach points.
std::vector<ExperimentResult> run_experiments(const ExperimentConfig& config);

// Helpers shared with the harness tests.

/// |last - prev| <= factor |prev - preprev| + 1e-10 max(1, |last|).
bool cauchy_ok(const std::vector<double>& column, double factor);
/// Least-squares slope of log|gap| against log t over the trailing `tail` rows.
double fitted_order(const std::vector<double>& t, const std::vector<double>& gap, int tail);

std::string to_csv(const ExperimentResult& result);
std::string to_svg(const ExperimentResult& result);
nlohmann::json to_json_summary(const ExperimentResult& result);
/// Writes <dir>/<config>_<experiment>.csv, .json and optionally .svg;
/// returns the written paths.
std::vector<std::filesystem::path> emit(const ExperimentResult& result,
                                        const std::filesystem::path& dir, bool svg);

}  // namespace spanlab
