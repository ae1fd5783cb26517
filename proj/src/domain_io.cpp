#include "spanlab/domain_io.hpp"

#include <fstream>
#include <set>
#include <string>

#include "spanlab/error.hpp"

namespace spanlab {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& what) {
  if (!obj.is_object()) throw Error(ErrorKind::Config, what + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw Error(ErrorKind::Config, "unknown key '" + key + "' in " + what);
  }
}

cplx point_of(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw Error(ErrorKind::Config, what + " must be an [x, y] pair");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

double number_of(const json& obj, const char* key, const std::string& what) {
  if (!obj.contains(key) || !obj.at(key).is_number()) {
    throw Error(ErrorKind::Config, what + " needs numeric '" + key + "'");
  }
  return obj.at(key).get<double>();
}

cplx center_of(const json& obj, const std::string& what) {
  return obj.contains("center") ? point_of(obj.at("center"), what + ".center") : cplx(0.0);
}

BoundaryCurve parse_curve(const json& obj, int nodes, const std::set<std::string>& extra,
                          const std::string& what) {
  if (!obj.is_object() || !obj.contains("type") || !obj.at("type").is_string()) {
    throw Error(ErrorKind::Config, what + " needs a string 'type'");
  }
  const std::string type = obj.at("type").get<std::string>();
  auto allowed = [&](std::set<std::string> keys) {
    keys.insert("type");
    keys.insert(extra.begin(), extra.end());
    reject_unknown(obj, keys, what);
  };
  if (type == "disk") {
    allowed({"center", "radius"});
    return BoundaryCurve::circle(center_of(obj, what), number_of(obj, "radius", what), true, nodes);
  }
  if (type == "ellipse") {
    allowed({"center", "semi_axes", "rotation"});
    const cplx axes = point_of(obj.at("semi_axes"), what + ".semi_axes");
    const double rotation = obj.contains("rotation") ? number_of(obj, "rotation", what) : 0.0;
    return BoundaryCurve::ellipse(center_of(obj, what), axes.real(), axes.imag(), rotation, nodes);
  }
  if (type == "polygon-smoothed") {
    allowed({"vertices", "modes"});
    if (!obj.contains("vertices") || !obj.at("vertices").is_array()) {
      throw Error(ErrorKind::Config, what + " needs a 'vertices' list");
    }
    std::vector<cplx> vertices;
    for (const json& v : obj.at("vertices")) vertices.push_back(point_of(v, what + ".vertices"));
    const int modes = obj.contains("modes") ? obj.at("modes").get<int>() : 32;
    return BoundaryCurve::smoothed_polygon(vertices, modes, nodes);
  }
  if (type == "fourier") {
    allowed({"coefficients"});
    if (!obj.contains("coefficients") || !obj.at("coefficients").is_array()) {
      throw Error(ErrorKind::Config, what + " needs a 'coefficients' list");
    }
    std::vector<std::pair<int, cplx>> modes;
    for (const json& c : obj.at("coefficients")) {
      if (!c.is_array() || c.size() != 3) {
        throw Error(ErrorKind::Config, what + " coefficients are [k, re, im] triples");
      }
      modes.emplace_back(c[0].get<int>(), cplx(c[1].get<double>(), c[2].get<double>()));
    }
    return BoundaryCurve::from_modes(modes, nodes);
  }
  throw Error(ErrorKind::Config, "unknown shape type '" + type + "' in " + what);
}

}  // namespace

Domain parse_domain(const json& spec) {
  if (!spec.is_object() || !spec.contains("type")) {
    throw Error(ErrorKind::Config, "domain needs a 'type'");
  }
  const int nodes = spec.contains("nodes") ? spec.at("nodes").get<int>() : kDefaultNodes;
  const std::string type = spec.at("type").get<std::string>();
  if (type == "annulus") {
    reject_unknown(spec, {"type", "center", "inner_radius", "outer_radius", "nodes"}, "domain");
    return make_annulus(center_of(spec, "domain"), number_of(spec, "inner_radius", "domain"),
                        number_of(spec, "outer_radius", "domain"), nodes);
  }
  BoundaryCurve outer = parse_curve(spec, nodes, {"holes", "nodes"}, "domain");
  std::vector<Hole> holes;
  if (spec.contains("holes")) {
    if (!spec.at("holes").is_array()) throw Error(ErrorKind::Config, "'holes' must be a list");
    for (std::size_t q = 0; q < spec.at("holes").size(); ++q) {
      const json& h = spec.at("holes")[q];
      const std::string what = "holes[" + std::to_string(q) + "]";
      BoundaryCurve curve = parse_curve(h, nodes, {"anchor"}, what);
      const cplx anchor = h.contains("anchor") ? point_of(h.at("anchor"), what + ".anchor")
                                               : curve.mean();
      holes.push_back({std::move(curve), anchor});
    }
  }
  return Domain(std::move(outer), std::move(holes));
}

Domain load_domain(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  json spec;
  try {
    in >> spec;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, path.string() + ": " + e.what());
  }
  return parse_domain(spec);
}

}  // namespace spanlab
