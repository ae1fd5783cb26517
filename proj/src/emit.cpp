#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "spanlab/error.hpp"
#include "spanlab/lab.hpp"

namespace spanlab {

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string stem(const ExperimentResult& r) { return r.config_name + "_" + to_string(r.kind); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace

std::string to_csv(const ExperimentResult& r) {
  std::ostringstream out;
  for (std::size_t c = 0; c < r.columns.size(); ++c) out << (c ? "," : "") << r.columns[c];
  out << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << num(row[c]);
    out << '\n';
  }
  return out.str();
}

std::string to_svg(const ExperimentResult& r) {
  const int panel_w = 360, panel_h = 220, pad = 48, per_row = 2;
  const std::size_t panels = r.columns.size() > 1 ? r.columns.size() - 1 : 0;
  const int rows = static_cast<int>((panels + per_row - 1) / per_row);
  const int width = per_row * panel_w;
  const int height = 40 + std::max(1, rows) * panel_h;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"10\" y=\"22\" font-size=\"14\">" << escape(stem(r))
      << " (x axis: log10 t)</text>\n";

  std::vector<double> x;
  for (const auto& row : r.rows) x.push_back(std::log10(row[0]));
  double xmin = x.empty() ? 0.0 : *std::min_element(x.begin(), x.end());
  double xmax = x.empty() ? 1.0 : *std::max_element(x.begin(), x.end());
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  for (std::size_t p = 0; p < panels; ++p) {
    const std::size_t col = p + 1;
    const int ox = static_cast<int>(p % per_row) * panel_w;
    const int oy = 40 + static_cast<int>(p / per_row) * panel_h;
    const int pw = panel_w - 2 * pad, ph = panel_h - 2 * pad;
    std::vector<double> y;
    for (const auto& row : r.rows) y.push_back(row[col]);
    double ymin = y.empty() ? 0.0 : *std::min_element(y.begin(), y.end());
    double ymax = y.empty() ? 1.0 : *std::max_element(y.begin(), y.end());
    if (ymax == ymin) {
      const double d = ymax == 0.0 ? 1.0 : 0.5 * std::abs(ymax);
      ymin -= d;
      ymax += d;
    }
    out << "<g>\n";
    out << "<text x=\"" << ox + pad << "\" y=\"" << oy + pad - 12 << "\">"
        << escape(r.columns[col]) << "</text>\n";
    out << "<rect x=\"" << ox + pad << "\" y=\"" << oy + pad << "\" width=\"" << pw
        << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#888\"/>\n";
    out << "<text x=\"" << ox + 4 << "\" y=\"" << oy + pad + 4 << "\">" << short_num(ymax)
        << "</text>\n";
    out << "<text x=\"" << ox + 4 << "\" y=\"" << oy + pad + ph << "\">" << short_num(ymin)
        << "</text>\n";
    out << "<text x=\"" << ox + pad << "\" y=\"" << oy + pad + ph + 16 << "\">"
        << short_num(xmin) << "</text>\n";
    out << "<text x=\"" << ox + pad + pw - 30 << "\" y=\"" << oy + pad + ph + 16 << "\">"
        << short_num(xmax) << "</text>\n";
    out << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double px = ox + pad + pw * (x[i] - xmin) / (xmax - xmin);
      const double py = oy + pad + ph * (ymax - y[i]) / (ymax - ymin);
      out << (i ? " " : "") << short_num(px) << "," << short_num(py);
    }
    out << "\"/>\n</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

nlohmann::json to_json_summary(const ExperimentResult& r) {
  nlohmann::json j;
  j["config"] = r.config_name;
  j["experiment"] = to_string(r.kind);
  j["columns"] = r.columns;
  j["rows"] = r.rows.size();
  j["passed"] = r.passed();
  nlohmann::json diag = nlohmann::json::object();
  for (const auto& [k, v] : r.diagnostics) diag[k] = v;
  j["diagnostics"] = diag;
  nlohmann::json gates = nlohmann::json::array();
  for (const Gate& g : r.gates) {
    gates.push_back({{"name", g.name}, {"passed", g.passed}, {"detail", g.detail}});
  }
  j["gates"] = gates;
  j["warnings"] = r.warnings;
  return j;
}

std::vector<std::filesystem::path> emit(const ExperimentResult& r,
                                        const std::filesystem::path& dir, bool svg) {
  for (const auto& row : r.rows) {
    for (double v : row) {
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::InvalidArgument, stem(r) + " has a non-finite value");
      }
    }
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> out;
  out.push_back(dir / (stem(r) + ".csv"));
  write_text(out.back(), to_csv(r));
  out.push_back(dir / (stem(r) + ".json"));
  write_text(out.back(), to_json_summary(r).dump(2) + "\n");
  if (svg) {
    out.push_back(dir / (stem(r) + ".svg"));
    write_text(out.back(), to_svg(r));
  }
  return out;
}

}  // namespace spanlab
