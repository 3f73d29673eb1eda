#include "cgabor_cli/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace cgabor::cli {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Viridis anchors at t = 0, 0.25, 0.5, 0.75, 1.
std::string color(double t) {
  static constexpr std::array<std::array<double, 3>, 5> anchors{{{68, 1, 84},
                                                                 {59, 82, 139},
                                                                 {33, 145, 140},
                                                                 {94, 201, 98},
                                                                 {253, 231, 37}}};
  if (!std::isfinite(t)) t = 0;
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int i = std::min(3, static_cast<int>(t));
  const double u = t - i;
  char buf[16];
  int rgb[3];
  for (int k = 0; k < 3; ++k)
    rgb[k] = static_cast<int>(std::lround(anchors[i][k] + u * (anchors[i + 1][k] - anchors[i][k])));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

std::string p3(double v) { return num("%.3f", v); }

}  // namespace

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return num("%.17g", v);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> fields) {
  if (fields.size() != header_.size()) throw std::invalid_argument("CSV row width differs from header");
  rows_.push_back(std::move(fields));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& f) {
    for (size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + csv_field(f[i]);
    out += "\r\n";
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string render_svg_heatmap(const std::vector<std::vector<double>>& rows, const HeatmapLabels& labels,
                               bool polar) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& r : rows)
    for (double v : r)
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  if (rows.empty() || !std::isfinite(lo)) throw std::invalid_argument("heatmap needs at least one finite value");
  const double span = hi > lo ? hi - lo : 1.0;
  auto shade = [&](double v) { return color((v - lo) / span); };

  const int W = 640, H = 700;
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(W) + "\" height=\"" +
       std::to_string(H) + "\" viewBox=\"0 0 " + std::to_string(W) + " " + std::to_string(H) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"320\" y=\"28\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">" +
       xml_escape(labels.title) + "</text>\n";

  const size_t nrows = rows.size();
  if (polar) {
    const double cx = 320, cy = 350, r_in = 40, r_out = 290;
    const double dr = (r_out - r_in) / static_cast<double>(nrows);
    for (size_t i = 0; i < nrows; ++i) {
      const double a = r_in + dr * static_cast<double>(i), b = a + dr;
      const size_t m = rows[i].size();
      if (m == 0) continue;
      if (m == 1) {
        // Full annulus as two half arcs per circle.
        s += "<path class=\"cell\" fill-rule=\"evenodd\" fill=\"" + shade(rows[i][0]) + "\" d=\"M " + p3(cx + b) +
             " " + p3(cy) + " A " + p3(b) + " " + p3(b) + " 0 1 0 " + p3(cx - b) + " " + p3(cy) + " A " + p3(b) +
             " " + p3(b) + " 0 1 0 " + p3(cx + b) + " " + p3(cy) + " Z M " + p3(cx + a) + " " + p3(cy) + " A " +
             p3(a) + " " + p3(a) + " 0 1 0 " + p3(cx - a) + " " + p3(cy) + " A " + p3(a) + " " + p3(a) +
             " 0 1 0 " + p3(cx + a) + " " + p3(cy) + " Z\"/>\n";
        continue;
      }
      for (size_t j = 0; j < m; ++j) {
        const double t0 = 2 * kPi * static_cast<double>(j) / static_cast<double>(m);
        const double t1 = 2 * kPi * static_cast<double>(j + 1) / static_cast<double>(m);
        const int large = (t1 - t0) > kPi ? 1 : 0;
        // Angles grow counter-clockwise on screen, so y is flipped.
        auto px = [&](double r, double t) { return p3(cx + r * std::cos(t)) + " " + p3(cy - r * std::sin(t)); };
        s += "<path class=\"cell\" fill=\"" + shade(rows[i][j]) + "\" d=\"M " + px(a, t0) + " L " + px(b, t0) +
             " A " + p3(b) + " " + p3(b) + " 0 " + std::to_string(large) + " 0 " + px(b, t1) + " L " + px(a, t1) +
             " A " + p3(a) + " " + p3(a) + " 0 " + std::to_string(large) + " 1 " + px(a, t0) + " Z\"/>\n";
      }
    }
    s += "<text x=\"320\" y=\"665\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">angle: " +
         xml_escape(labels.column_axis) + "; rings inner to outer: " + xml_escape(labels.row_axis) + "</text>\n";
  } else {
    size_t ncols = 0;
    for (const auto& r : rows) ncols = std::max(ncols, r.size());
    const double x0 = 60, y0 = 50, w = 560, h = 580;
    const double cw = w / static_cast<double>(std::max<size_t>(ncols, 1));
    const double ch = h / static_cast<double>(nrows);
    for (size_t i = 0; i < nrows; ++i)
      for (size_t j = 0; j < rows[i].size(); ++j)
        s += "<rect class=\"cell\" x=\"" + p3(x0 + cw * static_cast<double>(j)) + "\" y=\"" +
             p3(y0 + ch * static_cast<double>(i)) + "\" width=\"" + p3(cw) + "\" height=\"" + p3(ch) +
             "\" fill=\"" + shade(rows[i][j]) + "\"/>\n";
    s += "<text x=\"340\" y=\"650\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
         xml_escape(labels.column_axis) + "</text>\n";
    s += "<text x=\"20\" y=\"340\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 20 340)\">" +
         xml_escape(labels.row_axis) + "</text>\n";
  }
  s += "<text x=\"320\" y=\"688\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">min=" +
       fmt17(lo) + " max=" + fmt17(hi) + "</text>\n";
  s += "</svg>\n";
  return s;
}

std::string render_svg_torus(const std::vector<TorusMarker>& markers,
                             const std::vector<std::vector<double>>& background, const std::string& title) {
  const double x0 = 50, y0 = 50, side = 540;
  const double scale = side / (2 * kPi);
  // theta1 to the right, theta2 upwards.
  auto X = [&](double t) { return x0 + scale * t; };
  auto Y = [&](double t) { return y0 + side - scale * t; };
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"660\" viewBox=\"0 0 640 660\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"320\" y=\"30\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">" +
       xml_escape(title) + "</text>\n";
  if (!background.empty()) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& r : background)
      for (double v : r) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    const double span = hi > lo ? hi - lo : 1.0;
    const double ch = side / static_cast<double>(background.size());
    for (size_t i = 0; i < background.size(); ++i) {
      const double cw = side / static_cast<double>(background[i].size());
      for (size_t j = 0; j < background[i].size(); ++j)
        s += "<rect x=\"" + p3(x0 + cw * static_cast<double>(j)) + "\" y=\"" +
             p3(y0 + side - ch * static_cast<double>(i + 1)) + "\" width=\"" + p3(cw) + "\" height=\"" + p3(ch) +
             "\" fill=\"" + color(0.15 + 0.7 * (background[i][j] - lo) / span) + "\"/>\n";
    }
  }
  s += "<rect x=\"" + p3(x0) + "\" y=\"" + p3(y0) + "\" width=\"" + p3(side) + "\" height=\"" + p3(side) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  const double tick = 18;
  for (const auto& m : markers) {
    const double px = X(m.point(0)), py = Y(m.point(1));
    if (m.normal.size() == 2 && !m.flagged) {
      const double dx = tick * m.normal(0), dy = -tick * m.normal(1);
      s += "<line class=\"normal\" x1=\"" + p3(px - dx) + "\" y1=\"" + p3(py - dy) + "\" x2=\"" + p3(px + dx) +
           "\" y2=\"" + p3(py + dy) + "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
    }
    s += "<circle class=\"probe\" cx=\"" + p3(px) + "\" cy=\"" + p3(py) + "\" r=\"4\" fill=\"" +
         std::string(m.flagged ? "white" : "black") + "\" stroke=\"black\"/>\n";
  }
  s += "<text x=\"320\" y=\"625\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">theta1 in "
       "[0, 2pi)</text>\n";
  s += "<text x=\"25\" y=\"320\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
       "transform=\"rotate(-90 25 320)\">theta2 in [0, 2pi)</text>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace cgabor::cli
