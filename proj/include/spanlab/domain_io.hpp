#pragma once

#include <filesystem>

#include <json.hpp>

#include "spanlab/domain.hpp"

namespace spanlab {

/// Domain description schema (all coordinates are [x, y] pairs):
///
///   {"type": "disk",    "center": [0,0], "radius": 1}
///   {"type": "annulus", "center": [0,0], "inner_radius": 0.5, "outer_radius": 1}
///   {"type": "ellipse", "center": [0,0], "semi_axes": [1, 0.6], "rotation": 0}
///   {"type": "polygon-smoothed", "vertices": [[x,y], ...], "modes": 32}
///   {"type": "fourier", "coefficients": [[k, re, im], ...]}
///
/// Every type except "annulus" accepts "holes": a list of curve objects of
/// the same shapes, each with an optional "anchor" (defaults to the mean of
/// the hole curve). The top level accepts "nodes" (default 512). Unknown
/// keys are rejected.
Domain parse_domain(const nlohmann::json& spec);
Domain load_domain(const std::filesystem::path& path);

}  // namespace spanlab
