#include "spanlab/lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <numeric>
#include <set>
#include <thread>

#include "spanlab/curvature.hpp"
#include "spanlab/domain_io.hpp"
#include "spanlab/error.hpp"
#include "spanlab/reference.hpp"

namespace spanlab {

using nlohmann::json;

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::BoundaryMetric: return "boundary_metric";
    case ExperimentKind::CurvatureLimit: return "curvature_limit";
    case ExperimentKind::Localization: return "localization";
    case ExperimentKind::ScalingKernel: return "scaling_kernel";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (ExperimentKind k : {ExperimentKind::BoundaryMetric, ExperimentKind::CurvatureLimit,
                           ExperimentKind::Localization, ExperimentKind::ScalingKernel}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorKind::Config, "unknown experiment '" + name + "'");
}

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& what) {
  if (!obj.is_object()) throw Error(ErrorKind::Config, what + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw Error(ErrorKind::Config, "unknown key '" + key + "' in " + what);
  }
}

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) {
    throw Error(ErrorKind::Config, std::string("'") + key + "' must be a number");
  }
  return obj.at(key).get<double>();
}

int get_int(const json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number_integer()) {
    throw Error(ErrorKind::Config, std::string("'") + key + "' must be an integer");
  }
  return obj.at(key).get<int>();
}

bool get_bool(const json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) {
    throw Error(ErrorKind::Config, std::string("'") + key + "' must be true or false");
  }
  return obj.at(key).get<bool>();
}

template <class F>
void parallel_for(int count, int threads, F body) {
  if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::future<void>> workers;
  for (int w = 0; w < threads; ++w) {
    workers.push_back(std::async(std::launch::async, [&] {
      for (int i = next++; i < count; i = next++) body(i);
    }));
  }
  for (auto& f : workers) f.get();
}

int rule_degree(int base, const BasisRule& rule, double rho, double dist, double fraction) {
  double n = base;
  if (rule.automatic) n = std::max(n, std::ceil(rule.boundary_factor * rho / dist));
  n = std::min<double>(n, rule.max_degree);
  return std::max(1, static_cast<int>(std::ceil(fraction * n)));
}

/// Degrees for a model evaluated at `points`, scaled by `fraction`.
BasisDegrees rule_degrees(const Domain& d, const BasisRule& rule, const std::vector<cplx>& points,
                          double fraction) {
  auto closest = [&](const BoundaryCurve& c) {
    double m = std::numeric_limits<double>::infinity();
    for (cplx z : points) m = std::min(m, c.nearest(z).distance);
    return m;
  };
  BasisDegrees deg;
  const BoundaryCurve& outer = d.outer();
  deg.outer = rule_degree(rule.outer, rule, outer.max_radius_about(outer.mean()), closest(outer),
                          fraction);
  for (std::size_t q = 0; q < d.hole_count(); ++q) {
    const BoundaryCurve& h = d.hole_curve(q);
    deg.holes.push_back(
        rule_degree(rule.hole, rule, h.min_radius_about(d.anchor(q)), closest(h), fraction));
  }
  return deg;
}

struct ModelPair {
  std::shared_ptr<const KernelModel> fine;
  std::shared_ptr<const KernelModel> coarse;
};

ModelPair build_pair(const Domain& d, const ExperimentConfig& cfg, const std::vector<cplx>& pts) {
  int max_order = kDefaultMaxOrder;
  for (int n : cfg.curvature_orders) max_order = std::max(max_order, n);
  ModelPair p;
  p.fine = std::make_shared<const KernelModel>(
      build_model(d, rule_degrees(d, cfg.basis, pts, 1.0), {}, max_order));
  p.coarse = std::make_shared<const KernelModel>(
      build_model(d, rule_degrees(d, cfg.basis, pts, cfg.basis.comparison_fraction), {},
                  max_order));
  return p;
}

struct ApproachStep {
  double t = 0.0;
  cplx point;
  double dist = 0.0;
  ModelPair models;
};

BoundaryPoint snapped_boundary_point(const ExperimentConfig& cfg) {
  const BoundaryPoint bp = nearest_boundary_point(*cfg.domain, cfg.boundary_point);
  if (bp.distance > 1e-6 * cfg.domain->diameter()) {
    throw Error(ErrorKind::Config, "boundary_point is not on the domain boundary");
  }
  return bp;
}

std::vector<ApproachStep> approach_steps(const ExperimentConfig& cfg) {
  const BoundaryPoint bp = snapped_boundary_point(cfg);
  const std::vector<cplx> pts = inner_normal_sequence(*cfg.domain, bp.point, cfg.steps);
  std::vector<ApproachStep> steps(pts.size());
  parallel_for(static_cast<int>(pts.size()), cfg.threads, [&](int j) {
    ApproachStep& s = steps[j];
    s.t = cfg.steps[j];
    s.point = pts[j];
    s.dist = -signed_distance(*cfg.domain, pts[j]);
    s.models = build_pair(*cfg.domain, cfg, {pts[j]});
  });
  return steps;
}

std::vector<double> column_of(const std::vector<std::vector<double>>& rows, std::size_t c) {
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r[c]);
  return v;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void add_gate(ExperimentResult& r, std::string name, bool ok, std::string detail) {
  r.gates.push_back({std::move(name), ok, std::move(detail)});
}

/// |gap| strictly shrinking over the trailing `tail` rows, or every
/// trailing |gap| below `floor`.
bool shrinking(const std::vector<double>& gap, int tail, double floor) {
  const int n = static_cast<int>(gap.size());
  const int first = std::max(0, n - tail);
  bool all_small = true;
  bool strict = true;
  for (int i = first; i < n; ++i) {
    all_small = all_small && std::abs(gap[i]) <= floor;
    if (i > first && !(std::abs(gap[i]) < std::abs(gap[i - 1]))) strict = false;
  }
  return strict || all_small;
}

int max_outer_degree(const std::vector<ApproachStep>& steps) {
  int m = 0;
  for (const auto& s : steps) m = std::max(m, s.models.fine->basis().degrees().outer);
  return m;
}

ExperimentResult boundary_metric_from(const ExperimentConfig& cfg,
                                      const std::vector<ApproachStep>& steps) {
  ExperimentResult r;
  r.config_name = cfg.name;
  r.kind = ExperimentKind::BoundaryMetric;
  r.columns = {"t", "dist", "s", "s_dist2", "gap", "eps_model"};
  const BoundaryPoint bp = snapped_boundary_point(cfg);
  const DefiningFunctionPatch patch = DefiningFunctionPatch::signed_distance(*cfg.domain, bp.point);
  const double target = reference::halfplane_metric(limit_halfplane(patch).omega, 0.0);
  r.rows.resize(steps.size());
  parallel_for(static_cast<int>(steps.size()), cfg.threads, [&](int j) {
    const ApproachStep& s = steps[j];
    const double fine = s.models.fine->span_metric(s.point);
    const double coarse = s.models.coarse->span_metric(s.point);
    const double v = fine * s.dist * s.dist;
    r.rows[j] = {s.t, s.dist, fine, v, v - target, std::abs(fine - coarse) / fine};
  });
  const auto t = column_of(r.rows, 0);
  const auto value = column_of(r.rows, 3);
  const auto gap = column_of(r.rows, 4);
  const auto eps = column_of(r.rows, 5);
  const double order = fitted_order(t, gap, cfg.tolerances.tail);
  r.diagnostics = {{"target", target},
                   {"final_value", value.back()},
                   {"final_gap", gap.back()},
                   {"order", order},
                   {"eps_model_max", *std::max_element(eps.begin(), eps.end())},
                   {"max_outer_degree", double(max_outer_degree(steps))},
                   {"condition_last", steps.back().models.fine->gram().condition()}};
  add_gate(r, "final_gap", std::abs(gap.back()) <= cfg.tolerances.metric_gap,
           "|s dist^2 - " + fmt(target) + "| = " + fmt(std::abs(gap.back())) +
               " at t = " + fmt(t.back()) + ", tolerance " + fmt(cfg.tolerances.metric_gap));
  add_gate(r, "order", order >= cfg.tolerances.metric_order,
           "fitted order " + fmt(order) + ", need >= " + fmt(cfg.tolerances.metric_order));
  add_gate(r, "cauchy", cauchy_ok(value, cfg.tolerances.cauchy_factor), "s dist^2 column");
  add_gate(r, "model_resolution", eps.back() <= std::max(0.1 * std::abs(gap.back()), 1e-9),
           "eps_model " + fmt(eps.back()));
  return r;
}

ExperimentResult curvature_limit_from(const ExperimentConfig& cfg,
                                      const std::vector<ApproachStep>& steps) {
  ExperimentResult r;
  r.config_name = cfg.name;
  r.kind = ExperimentKind::CurvatureLimit;
  r.columns = {"t", "dist"};
  const auto& orders = cfg.curvature_orders;
  for (int n : orders) {
    const std::string k = std::to_string(n);
    r.columns.insert(r.columns.end(), {"kappa" + k, "gap" + k, "eps" + k, "imag" + k});
  }
  r.rows.resize(steps.size());
  parallel_for(static_cast<int>(steps.size()), cfg.threads, [&](int j) {
    const ApproachStep& s = steps[j];
    std::vector<double> row{s.t, s.dist};
    for (int n : orders) {
      const CurvatureReport fine = curvature_report(*s.models.fine, s.point, n);
      const CurvatureReport coarse = curvature_report(*s.models.coarse, s.point, n);
      row.insert(row.end(), {fine.kappa, fine.kappa - fine.bound,
                             std::abs(fine.kappa - coarse.kappa), fine.imaginary_residue});
    }
    r.rows[j] = std::move(row);
  });
  r.diagnostics.push_back({"max_outer_degree", double(max_outer_degree(steps))});
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const int n = orders[i];
    const std::string k = std::to_string(n);
    const double bound = burbea_bound(n);
    const auto kappa = column_of(r.rows, 2 + 4 * i);
    const auto gap = column_of(r.rows, 3 + 4 * i);
    const auto eps = column_of(r.rows, 4 + 4 * i);
    const auto imag = column_of(r.rows, 5 + 4 * i);
    r.diagnostics.push_back({"bound" + k, bound});
    r.diagnostics.push_back({"final_kappa" + k, kappa.back()});
    r.diagnostics.push_back({"final_gap" + k, gap.back()});
    if (n == 1) {
      add_gate(r, "final_gap1", std::abs(gap.back()) <= cfg.tolerances.kappa1_gap,
               "|kappa1 + 4| = " + fmt(std::abs(gap.back())) + ", tolerance " +
                   fmt(cfg.tolerances.kappa1_gap));
    } else {
      const double rel = std::abs(gap.back()) / std::abs(bound);
      add_gate(r, "final_gap" + k, rel <= cfg.tolerances.kappa_relative_gap,
               "relative gap " + fmt(rel) + ", tolerance " +
                   fmt(cfg.tolerances.kappa_relative_gap));
    }
    add_gate(r, "monotone" + k, shrinking(gap, cfg.tolerances.tail, 1e-9 * std::abs(bound)),
             "|kappa" + k + " - bound| over the last " + std::to_string(cfg.tolerances.tail) +
                 " steps");
    bool below = true;
    for (std::size_t j = 0; j < kappa.size(); ++j) {
      below = below && kappa[j] <= bound + eps[j] + 1e-9 * std::abs(bound);
    }
    add_gate(r, "burbea" + k, below, "kappa" + k + " <= " + fmt(bound) + " + eps_model");
    add_gate(r, "cauchy" + k, cauchy_ok(kappa, cfg.tolerances.cauchy_factor), "kappa" + k);
    const double worst_imag = *std::max_element(imag.begin(), imag.end());
    add_gate(r, "real" + k, worst_imag <= 1e-8, "imaginary residue " + fmt(worst_imag));
  }
  return r;
}

struct Neighborhood {
  cplx center;
  double radius = 0.0;
  cplx outer_center;
  double outer_radius = 0.0;
};

Neighborhood localization_neighborhood(const ExperimentConfig& cfg) {
  const Domain& d = *cfg.domain;
  if (d.hole_count() == 0) {
    throw Error(ErrorKind::Config, "localization needs a multiply connected domain");
  }
  Neighborhood u;
  if (!d.outer().is_circle(&u.outer_center, &u.outer_radius)) {
    throw Error(ErrorKind::Config, "localization needs a circular outer boundary");
  }
  const BoundaryPoint bp = snapped_boundary_point(cfg);
  if (bp.curve != 0) {
    throw Error(ErrorKind::Config, "localization needs the boundary point on the outer curve");
  }
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < d.hole_count(); ++q) {
    gap = std::min(gap, d.hole_curve(q).nearest(bp.point).distance);
  }
  u.center = bp.point;
  u.radius = 0.5 * gap;
  if (!(cfg.steps.front() < u.radius)) {
    throw Error(ErrorKind::Config, "first step leaves the localization neighborhood");
  }
  return u;
}

ExperimentResult localization_from(const ExperimentConfig& cfg,
                                   const std::vector<ApproachStep>& steps) {
  ExperimentResult r;
  r.config_name = cfg.name;
  r.kind = ExperimentKind::Localization;
  r.columns = {"t", "s_domain", "s_local", "ratio", "ratio_gap", "sandwich_upper",
               "halfdisk_ratio", "eps_model"};
  const Neighborhood u = localization_neighborhood(cfg);
  const reference::LuneMetric lune(u.outer_center, u.outer_radius, u.center, u.radius);
  r.rows.resize(steps.size());
  parallel_for(static_cast<int>(steps.size()), cfg.threads, [&](int j) {
    const ApproachStep& s = steps[j];
    const double sd = s.models.fine->span_metric(s.point);
    const double sc = s.models.coarse->span_metric(s.point);
    const double sl = lune(s.point);
    const double filled = reference::disk_metric(u.outer_center, u.outer_radius, s.point);
    const double ratio = sl / sd;
    r.rows[j] = {s.t, sd, sl, ratio, ratio - 1.0, sl / filled,
                 reference::halfdisk_ratio(u.radius, cplx(0.0, s.t)), std::abs(sd - sc) / sd};
  });
  const auto ratio = column_of(r.rows, 3);
  const auto gap = column_of(r.rows, 4);
  const auto eps = column_of(r.rows, 7);
  r.diagnostics = {{"neighborhood_radius", u.radius},
                   {"final_ratio", ratio.back()},
                   {"max_outer_degree", double(max_outer_degree(steps))}};
  bool above = true;
  for (std::size_t j = 0; j < ratio.size(); ++j) above = above && ratio[j] >= 1.0 - 10.0 * eps[j];
  add_gate(r, "ratio_at_least_one", above, "s_local / s_domain >= 1 at every step");
  add_gate(r, "final_gap", std::abs(gap.back()) <= cfg.tolerances.localization_gap,
           "|ratio - 1| = " + fmt(std::abs(gap.back())) + ", tolerance " +
               fmt(cfg.tolerances.localization_gap));
  add_gate(r, "monotone", shrinking(gap, cfg.tolerances.tail, 1e-12), "ratio - 1 shrinking");
  add_gate(r, "cauchy", cauchy_ok(ratio, cfg.tolerances.cauchy_factor), "ratio column");
  return r;
}

std::vector<cplx> halfplane_grid(const HalfPlane& h, const WindowSpec& w) {
  const double len = std::abs(h.omega);
  const cplx dir = h.omega / len;
  const cplx along = cplx(0.0, 1.0) * dir;
  std::vector<cplx> out;
  const int g = std::max(1, w.grid);
  for (int a = 0; a < g; ++a) {
    const double x = 1.0 / len - w.margin - (g > 1 ? w.extent * a / (g - 1) : 0.0);
    for (int b = 0; b < g; ++b) {
      const double y = g > 1 ? w.extent * (2.0 * b / (g - 1) - 1.0) : 0.0;
      out.push_back(x * dir + y * along);
    }
  }
  return out;
}

}  // namespace

bool ExperimentResult::passed() const {
  return std::all_of(gates.begin(), gates.end(), [](const Gate& g) { return g.passed; });
}

std::size_t ExperimentResult::column(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw Error(ErrorKind::InvalidArgument, "no column " + name);
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> ExperimentResult::values(const std::string& name) const {
  return column_of(rows, column(name));
}

double ExperimentResult::diagnostic(const std::string& name) const {
  for (const auto& [k, v] : diagnostics) {
    if (k == name) return v;
  }
  throw Error(ErrorKind::InvalidArgument, "no diagnostic " + name);
}

bool cauchy_ok(const std::vector<double>& c, double factor) {
  const std::size_t n = c.size();
  if (n < 3) return true;
  const double last = std::abs(c[n - 1] - c[n - 2]);
  const double prev = std::abs(c[n - 2] - c[n - 3]);
  return last <= factor * prev + 1e-10 * std::max(1.0, std::abs(c[n - 1]));
}

double fitted_order(const std::vector<double>& t, const std::vector<double>& gap, int tail) {
  const int n = static_cast<int>(t.size());
  const int first = std::max(0, n - tail);
  std::vector<double> x, y;
  for (int i = first; i < n; ++i) {
    x.push_back(std::log(t[i]));
    y.push_back(std::log(std::abs(gap[i])));
  }
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

ExperimentResult experiment_boundary_metric(const ExperimentConfig& config) {
  return boundary_metric_from(config, approach_steps(config));
}

ExperimentResult experiment_curvature_limit(const ExperimentConfig& config) {
  return curvature_limit_from(config, approach_steps(config));
}

ExperimentResult experiment_localization(const ExperimentConfig& config) {
  localization_neighborhood(config);
  return localization_from(config, approach_steps(config));
}

ExperimentResult experiment_scaling_kernel(const ExperimentConfig& cfg) {
  ExperimentResult r;
  r.config_name = cfg.name;
  r.kind = ExperimentKind::ScalingKernel;
  r.columns = {"t", "scale", "sup_gap", "s_scaled_0", "s_limit_0", "hausdorff", "grid_points",
               "eps_model"};
  const BoundaryPoint bp = snapped_boundary_point(cfg);
  const DefiningFunctionPatch patch = DefiningFunctionPatch::signed_distance(*cfg.domain, bp.point);
  const HalfPlane plane = limit_halfplane(patch);
  const std::vector<cplx> grid = halfplane_grid(plane, cfg.window);
  const std::vector<cplx> centers = inner_normal_sequence(*cfg.domain, bp.point, cfg.steps);
  const std::vector<cplx> line =
      halfplane_boundary_samples(plane, cfg.window.radius, cfg.window.spacing);
  const double s_limit = reference::halfplane_metric(plane.omega, 0.0);

  const int n = static_cast<int>(centers.size());
  r.rows.resize(n);
  std::vector<std::string> dropped(n);
  std::vector<int> drop_count(n, 0);
  parallel_for(n, cfg.threads, [&](int j) {
    const AffineScalingMap map = scaling_map(*cfg.domain, patch, centers[j]);
    const Domain dj = scaled_domain(*cfg.domain, map);
    std::vector<cplx> kept;
    for (cplx z : grid) {
      if (strictly_inside(dj, z)) kept.push_back(z);
    }
    drop_count[j] = static_cast<int>(grid.size() - kept.size());
    if (drop_count[j] > 0) {
      dropped[j] = "step " + std::to_string(j) + ": " + std::to_string(drop_count[j]) +
                   " grid points outside the scaled domain were dropped";
    }
    std::vector<cplx> eval = kept;
    eval.push_back(0.0);
    const ModelPair models = build_pair(dj, cfg, eval);
    double gap = 0.0, eps = 0.0;
    std::vector<Eigen::MatrixXcd> yf, yc;
    for (cplx z : kept) {
      models.fine->check_interior(z);
      yf.push_back(models.fine->jet(z, 0));
      yc.push_back(models.coarse->jet(z, 0));
    }
    for (std::size_t a = 0; a < kept.size(); ++a) {
      for (std::size_t b = 0; b < kept.size(); ++b) {
        const cplx kf = yf[b].col(0).dot(yf[a].col(0));
        const cplx kc = yc[b].col(0).dot(yc[a].col(0));
        const cplx kh = reference::halfplane_kernel(plane.omega, kept[a], kept[b]);
        gap = std::max(gap, std::abs(kf - kh));
        eps = std::max(eps, std::abs(kf - kc));
      }
    }
    const double s0 = models.fine->span_metric(0.0);
    const std::vector<cplx> bd = boundary_samples_in_ball(dj, cfg.window.radius, cfg.window.spacing);
    const double dh = hausdorff_distance_local(bd, line, cfg.window.radius);
    r.rows[j] = {cfg.steps[j], map.scale, gap, s0, s_limit, dh, double(kept.size()), eps};
  });
  for (const auto& w : dropped) {
    if (!w.empty()) r.warnings.push_back(w);
  }

  const auto gap = column_of(r.rows, 2);
  const auto scale = column_of(r.rows, 1);
  const auto s0 = column_of(r.rows, 3);
  const auto dh = column_of(r.rows, 5);
  double num = 0.0, den = 0.0;
  for (int j = 0; j < n; ++j) {
    num += dh[j] * scale[j];
    den += scale[j] * scale[j];
  }
  const double c = num / den;
  r.diagnostics = {{"hausdorff_constant", c},
                   {"kernel_reduction", gap.front() / gap.back()},
                   {"final_sup_gap", gap.back()},
                   {"s_limit_0", s_limit}};
  add_gate(r, "kernel_reduction", gap.front() >= cfg.tolerances.kernel_reduction * gap.back(),
           "sup gap " + fmt(gap.front()) + " -> " + fmt(gap.back()) + ", need factor " +
               fmt(cfg.tolerances.kernel_reduction));
  bool within = true;
  for (int j = 0; j < n; ++j) {
    within = within && dh[j] <= cfg.tolerances.hausdorff_factor * c * scale[j];
  }
  add_gate(r, "hausdorff", within,
           "d_H <= " + fmt(cfg.tolerances.hausdorff_factor) + " C scale with C = " + fmt(c));
  add_gate(r, "diagonal", std::abs(s0.back() - s_limit) <= cfg.tolerances.metric_gap,
           "|s_scaled(0) - " + fmt(s_limit) + "| = " + fmt(std::abs(s0.back() - s_limit)));
  bool coarse_only = true;
  for (int j = 1; j < n; ++j) coarse_only = coarse_only && !(drop_count[j] > 0 && drop_count[j - 1] == 0);
  add_gate(r, "drops_coarse_only", coarse_only, "grid drops only at leading steps");
  add_gate(r, "cauchy", cauchy_ok(s0, cfg.tolerances.cauchy_factor), "s_scaled(0) column");
  return r;
}

std::vector<ExperimentResult> run_experiments(const ExperimentConfig& config) {
  const auto& kinds = config.experiments;
  const bool need_steps = std::any_of(kinds.begin(), kinds.end(), [](ExperimentKind k) {
    return k != ExperimentKind::ScalingKernel;
  });
  if (std::count(kinds.begin(), kinds.end(), ExperimentKind::Localization)) {
    localization_neighborhood(config);
  }
  std::vector<ApproachStep> steps;
  if (need_steps) steps = approach_steps(config);
  std::vector<ExperimentResult> out;
  for (ExperimentKind k : kinds) {
    switch (k) {
      case ExperimentKind::BoundaryMetric: out.push_back(boundary_metric_from(config, steps)); break;
      case ExperimentKind::CurvatureLimit: out.push_back(curvature_limit_from(config, steps)); break;
      case ExperimentKind::Localization: out.push_back(localization_from(config, steps)); break;
      case ExperimentKind::ScalingKernel: out.push_back(experiment_scaling_kernel(config)); break;
    }
  }
  return out;
}

ExperimentConfig parse_config(const json& spec, const std::filesystem::path& base_dir) {
  try {
    reject_unknown(spec,
                   {"name", "domain", "boundary_point", "steps", "experiments", "curvature_orders",
                    "basis", "window", "tolerances", "output", "threads"},
                   "config");
    ExperimentConfig cfg;
    if (spec.contains("name")) {
      if (!spec.at("name").is_string()) throw Error(ErrorKind::Config, "'name' must be a string");
      cfg.name = spec.at("name").get<std::string>();
      if (cfg.name.empty() || cfg.name.find_first_of("/\\") != std::string::npos) {
        throw Error(ErrorKind::Config, "'name' must be a plain file stem");
      }
    }
    if (!spec.contains("domain")) throw Error(ErrorKind::Config, "config needs 'domain'");
    cfg.domain_spec = spec.at("domain");
    cfg.domain = std::make_shared<const Domain>(parse_domain(cfg.domain_spec));
    if (!spec.contains("boundary_point")) {
      throw Error(ErrorKind::Config, "config needs 'boundary_point'");
    }
    const json& bp = spec.at("boundary_point");
    if (!bp.is_array() || bp.size() != 2 || !bp[0].is_number() || !bp[1].is_number()) {
      throw Error(ErrorKind::Config, "'boundary_point' must be an [x, y] pair");
    }
    cfg.boundary_point = {bp[0].get<double>(), bp[1].get<double>()};

    if (!spec.contains("steps")) {
      cfg.steps = geometric_steps(0.1, 0.5, 10);
    } else if (spec.at("steps").is_array()) {
      for (const json& v : spec.at("steps")) {
        if (!v.is_number()) throw Error(ErrorKind::Config, "'steps' entries must be numbers");
        cfg.steps.push_back(v.get<double>());
      }
    } else {
      const json& s = spec.at("steps");
      reject_unknown(s, {"t0", "ratio", "count"}, "steps");
      cfg.steps = geometric_steps(get_number(s, "t0", 0.1), get_number(s, "ratio", 0.5),
                                  get_int(s, "count", 10));
    }
    if (cfg.steps.empty()) throw Error(ErrorKind::Config, "'steps' is empty");
    for (std::size_t j = 0; j < cfg.steps.size(); ++j) {
      if (!(cfg.steps[j] > 0.0) || (j > 0 && !(cfg.steps[j] < cfg.steps[j - 1]))) {
        throw Error(ErrorKind::Config, "steps must be positive and strictly decreasing");
      }
    }

    if (spec.contains("experiments")) {
      if (!spec.at("experiments").is_array()) {
        throw Error(ErrorKind::Config, "'experiments' must be a list");
      }
      for (const json& v : spec.at("experiments")) {
        if (!v.is_string()) throw Error(ErrorKind::Config, "experiment names must be strings");
        cfg.experiments.push_back(experiment_kind_from_string(v.get<std::string>()));
      }
    } else {
      cfg.experiments = {ExperimentKind::BoundaryMetric, ExperimentKind::CurvatureLimit,
                         ExperimentKind::ScalingKernel};
      if (cfg.domain->hole_count() > 0) {
        cfg.experiments.insert(cfg.experiments.begin() + 2, ExperimentKind::Localization);
      }
    }
    if (spec.contains("curvature_orders")) {
      cfg.curvature_orders.clear();
      if (!spec.at("curvature_orders").is_array()) {
        throw Error(ErrorKind::Config, "'curvature_orders' must be a list");
      }
      for (const json& v : spec.at("curvature_orders")) {
        if (!v.is_number_integer() || v.get<int>() < 1 || v.get<int>() > 5) {
          throw Error(ErrorKind::Config, "curvature orders must be integers in 1..5");
        }
        cfg.curvature_orders.push_back(v.get<int>());
      }
    }
    if (spec.contains("basis")) {
      const json& b = spec.at("basis");
      reject_unknown(b,
                     {"outer", "hole", "auto", "boundary_factor", "max_degree",
                      "comparison_fraction"},
                     "basis");
      cfg.basis.outer = get_int(b, "outer", cfg.basis.outer);
      cfg.basis.hole = get_int(b, "hole", cfg.basis.hole);
      cfg.basis.automatic = get_bool(b, "auto", cfg.basis.automatic);
      cfg.basis.boundary_factor = get_number(b, "boundary_factor", cfg.basis.boundary_factor);
      cfg.basis.max_degree = get_int(b, "max_degree", cfg.basis.max_degree);
      cfg.basis.comparison_fraction =
          get_number(b, "comparison_fraction", cfg.basis.comparison_fraction);
      if (cfg.basis.outer < 1 || cfg.basis.hole < 1 || cfg.basis.max_degree < 1 ||
          !(cfg.basis.boundary_factor > 0.0) ||
          !(cfg.basis.comparison_fraction > 0.0 && cfg.basis.comparison_fraction < 1.0)) {
        throw Error(ErrorKind::Config, "basis settings out of range");
      }
    }
    if (spec.contains("window")) {
      const json& w = spec.at("window");
      reject_unknown(w, {"radius", "grid", "margin", "extent", "spacing"}, "window");
      cfg.window.radius = get_number(w, "radius", cfg.window.radius);
      cfg.window.grid = get_int(w, "grid", cfg.window.grid);
      cfg.window.margin = get_number(w, "margin", cfg.window.margin);
      cfg.window.extent = get_number(w, "extent", cfg.window.extent);
      cfg.window.spacing = get_number(w, "spacing", cfg.window.spacing);
      if (!(cfg.window.radius > 0.0) || cfg.window.grid < 1 || !(cfg.window.margin > 0.0) ||
          !(cfg.window.extent >= 0.0) || !(cfg.window.spacing > 0.0)) {
        throw Error(ErrorKind::Config, "window settings out of range");
      }
    }
    if (spec.contains("tolerances")) {
      const json& t = spec.at("tolerances");
      reject_unknown(t,
                     {"metric_gap", "metric_order", "kappa1_gap", "kappa_relative_gap",
                      "localization_gap", "kernel_reduction", "hausdorff_factor", "cauchy_factor",
                      "tail"},
                     "tolerances");
      Tolerances& tol = cfg.tolerances;
      tol.metric_gap = get_number(t, "metric_gap", tol.metric_gap);
      tol.metric_order = get_number(t, "metric_order", tol.metric_order);
      tol.kappa1_gap = get_number(t, "kappa1_gap", tol.kappa1_gap);
      tol.kappa_relative_gap = get_number(t, "kappa_relative_gap", tol.kappa_relative_gap);
      tol.localization_gap = get_number(t, "localization_gap", tol.localization_gap);
      tol.kernel_reduction = get_number(t, "kernel_reduction", tol.kernel_reduction);
      tol.hausdorff_factor = get_number(t, "hausdorff_factor", tol.hausdorff_factor);
      tol.cauchy_factor = get_number(t, "cauchy_factor", tol.cauchy_factor);
      tol.tail = get_int(t, "tail", tol.tail);
      if (tol.tail < 2) throw Error(ErrorKind::Config, "'tail' must be >= 2");
    }
    if (spec.contains("output")) {
      const json& o = spec.at("output");
      reject_unknown(o, {"dir", "svg"}, "output");
      if (o.contains("dir")) {
        if (!o.at("dir").is_string()) throw Error(ErrorKind::Config, "'output.dir' must be a string");
        cfg.output_dir = o.at("dir").get<std::string>();
      }
      cfg.svg = get_bool(o, "svg", cfg.svg);
    }
    if (cfg.output_dir.is_relative() && !base_dir.empty()) cfg.output_dir = base_dir / cfg.output_dir;
    cfg.threads = get_int(spec, "threads", 0);
    if (cfg.threads < 0) throw Error(ErrorKind::Config, "'threads' must be >= 0");
    return cfg;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  json spec;
  try {
    spec = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, path.string() + ": " + e.what());
  }
  return parse_config(spec, path.parent_path());
}

void validate_config(const ExperimentConfig& config) {
  const BoundaryPoint bp = snapped_boundary_point(config);
  inner_normal_sequence(*config.domain, bp.point, config.steps);
  if (std::count(config.experiments.begin(), config.experiments.end(),
                 ExperimentKind::Localization)) {
    localization_neighborhood(config);
  }
  if (std::count(config.experiments.begin(), config.experiments.end(),
                 ExperimentKind::ScalingKernel)) {
    const DefiningFunctionPatch patch =
        DefiningFunctionPatch::signed_distance(*config.domain, bp.point);
    limit_halfplane(patch);
  }
}

}  // namespace spanlab
