// Copyright 2026 The dinlab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// CSV tables and static SVG charts.

#ifndef DINLAB_IO_HPP
#define DINLAB_IO_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "dinlab/common.hpp"
#include "dinlab/integrator.hpp"

namespace dinlab {

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15e", v);
  return buf;
}

/// Column-oriented table. Every file starts with `# schema: ...` followed by
/// the header row.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::string note;

  std::string render() const {
    std::string out = "# schema: ";
    for (std::size_t j = 0; j < columns.size(); ++j) out += (j ? "," : "") + columns[j];
    out += " (all columns are IEEE doubles)";
    if (!note.empty()) out += "; " + note;
    out += "\n";
    for (std::size_t j = 0; j < columns.size(); ++j) out += (j ? "," : "") + columns[j];
    out += "\n";
    for (const auto& r : rows) {
      for (std::size_t j = 0; j < r.size(); ++j) out += (j ? "," : "") + format_number(r[j]);
      out += "\n";
    }
    return out;
  }
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << text;
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

inline CsvTable trajectory_table(const Trajectory& traj) {
  CsvTable t;
  t.columns = {"t", "f_gap", "grad_norm", "speed_norm"};
  const char* comp = traj.kind == PhaseKind::position_auxiliary ? "y" : "v";
  for (int k = 0; k < traj.dim; ++k) t.columns.push_back("x" + std::to_string(k));
  if (traj.kind != PhaseKind::position_only)
    for (int k = 0; k < traj.dim; ++k) t.columns.push_back(comp + std::to_string(k));
  t.note = std::string("state layout ") + to_string(traj.kind);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    std::vector<double> r = {traj.times[i], traj.f_gap[i], traj.grad_norm[i],
                             traj.speed_norm[i]};
    for (int k = 0; k < traj.states[i].size(); ++k) r.push_back(traj.states[i](k));
    t.rows.push_back(std::move(r));
  }
  return t;
}

// ---------------------------------------------------------------------------
// SVG

inline std::string xml_escape(const std::string& s) {
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

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<Series> series;
};

namespace detail {

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  return colors[i % 8];
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace detail

/// Renders a line chart. With log_y the y axis shows log10 of the data;
/// nonpositive values break the polyline.
inline std::string render_svg(const LineChart& chart) {
  const double W = 720, H = 480, ml = 80, mr = 200, mt = 40, mb = 60;
  const double pw = W - ml - mr, ph = H - mt - mb;
  auto ty = [&](double y) { return chart.log_y ? (y > 0 ? std::log10(y) : NAN) : y; };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : chart.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double yy = ty(s.y[i]);
      if (!std::isfinite(s.x[i]) || !std::isfinite(yy)) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, yy);
      y1 = std::max(y1, yy);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return mt + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::string o;
  o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::num(W) + "\" height=\"" +
       detail::num(H) + "\" viewBox=\"0 0 " + detail::num(W) + " " + detail::num(H) + "\">\n";
  o += "<rect x=\"0\" y=\"0\" width=\"" + detail::num(W) + "\" height=\"" + detail::num(H) +
       "\" fill=\"white\"/>\n";
  o += "<text x=\"" + detail::num(ml) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">" +
       xml_escape(chart.title) + "</text>\n";
  o += "<rect x=\"" + detail::num(ml) + "\" y=\"" + detail::num(mt) + "\" width=\"" +
       detail::num(pw) + "\" height=\"" + detail::num(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = x0 + (x1 - x0) * k / 5.0, yv = y0 + (y1 - y0) * k / 5.0;
    o += "<text x=\"" + detail::num(px(xv)) + "\" y=\"" + detail::num(mt + ph + 18) +
         "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
         detail::tick(xv) + "</text>\n";
    o += "<text x=\"" + detail::num(ml - 6) + "\" y=\"" + detail::num(py(yv) + 4) +
         "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
         detail::tick(yv) + "</text>\n";
  }
  o += "<text x=\"" + detail::num(ml + pw / 2) + "\" y=\"" + detail::num(H - 16) +
       "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
       xml_escape(chart.x_label) + "</text>\n";
  const std::string yl = chart.log_y ? "log10 " + chart.y_label : chart.y_label;
  o += "<text x=\"18\" y=\"" + detail::num(mt + ph / 2) +
       "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
       detail::num(mt + ph / 2) + ")\">" + xml_escape(yl) + "</text>\n";

  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const auto& s = chart.series[k];
    std::string pts;
    auto flush = [&] {
      if (pts.empty()) return;
      o += "<polyline fill=\"none\" stroke=\"" + std::string(detail::palette(k)) +
           "\" stroke-width=\"1.5\"" +
           (s.dashed ? std::string(" stroke-dasharray=\"6 4\"") : std::string()) +
           " points=\"" + pts + "\"/>\n";
      pts.clear();
    };
    // Thin long series to roughly one point per horizontal pixel.
    const std::size_t stride = std::max<std::size_t>(1, s.x.size() / 1200);
    for (std::size_t i = 0; i < s.x.size(); i += stride) {
      const double yy = ty(s.y[i]);
      if (!std::isfinite(yy) || !std::isfinite(s.x[i])) {
        flush();
        continue;
      }
      pts += detail::num(px(s.x[i])) + "," + detail::num(py(yy)) + " ";
    }
    flush();
    const double ly = mt + 14 + 18.0 * k;
    o += "<line x1=\"" + detail::num(ml + pw + 12) + "\" y1=\"" + detail::num(ly) + "\" x2=\"" +
         detail::num(ml + pw + 36) + "\" y2=\"" + detail::num(ly) + "\" stroke=\"" +
         detail::palette(k) + "\" stroke-width=\"2\"" +
         (s.dashed ? std::string(" stroke-dasharray=\"6 4\"") : std::string()) + "/>\n";
    o += "<text x=\"" + detail::num(ml + pw + 40) + "\" y=\"" + detail::num(ly + 4) +
         "\" font-family=\"sans-serif\" font-size=\"10\">" + xml_escape(s.name) + "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

/// Heatmap of values(i, j) with rows along y (ys) and columns along x (xs).
inline std::string render_heatmap_svg(const std::string& title, const std::string& x_label,
                                      const std::string& y_label, const std::vector<double>& xs,
                                      const std::vector<double>& ys, const Matrix& values) {
  require(values.rows() == static_cast<Eigen::Index>(ys.size()) &&
              values.cols() == static_cast<Eigen::Index>(xs.size()),
          "render_heatmap_svg: shape mismatch");
  const double W = 640, H = 560, ml = 70, mr = 110, mt = 40, mb = 60;
  const double pw = W - ml - mr, ph = H - mt - mb;
  const double vmin = values.minCoeff(), vmax = values.maxCoeff();
  const double span = vmax > vmin ? vmax - vmin : 1.0;
  auto color = [&](double v) {
    // Blue to yellow ramp.
    const double s = std::clamp((v - vmin) / span, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(40 + 215 * s));
    const int g = static_cast<int>(std::lround(30 + 200 * s));
    const int b = static_cast<int>(std::lround(120 * (1.0 - s) + 20));
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return std::string(buf);
  };
  const double cw = pw / xs.size(), ch = ph / ys.size();
  std::string o;
  o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::num(W) + "\" height=\"" +
       detail::num(H) + "\" viewBox=\"0 0 " + detail::num(W) + " " + detail::num(H) + "\">\n";
  o += "<rect x=\"0\" y=\"0\" width=\"" + detail::num(W) + "\" height=\"" + detail::num(H) +
       "\" fill=\"white\"/>\n";
  o += "<text x=\"" + detail::num(ml) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">" +
       xml_escape(title) + "</text>\n";
  o += "<g shape-rendering=\"crispEdges\">\n";
  for (Eigen::Index i = 0; i < values.rows(); ++i)
    for (Eigen::Index j = 0; j < values.cols(); ++j)
      o += "<rect x=\"" + detail::num(ml + j * cw) + "\" y=\"" +
           detail::num(mt + ph - (i + 1) * ch) + "\" width=\"" + detail::num(cw + 0.3) +
           "\" height=\"" + detail::num(ch + 0.3) + "\" fill=\"" + color(values(i, j)) + "\"/>\n";
  o += "</g>\n";
  for (int k = 0; k <= 4; ++k) {
    const std::size_t jx = std::min(xs.size() - 1, xs.size() * k / 4);
    const std::size_t iy = std::min(ys.size() - 1, ys.size() * k / 4);
    o += "<text x=\"" + detail::num(ml + (jx + 0.5) * cw) + "\" y=\"" + detail::num(mt + ph + 18) +
         "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
         detail::tick(xs[jx]) + "</text>\n";
    o += "<text x=\"" + detail::num(ml - 6) + "\" y=\"" +
         detail::num(mt + ph - (iy + 0.5) * ch + 4) +
         "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
         detail::tick(ys[iy]) + "</text>\n";
  }
  o += "<text x=\"" + detail::num(ml + pw / 2) + "\" y=\"" + detail::num(H - 16) +
       "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
       xml_escape(x_label) + "</text>\n";
  o += "<text x=\"18\" y=\"" + detail::num(mt + ph / 2) +
       "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
       detail::num(mt + ph / 2) + ")\">" + xml_escape(y_label) + "</text>\n";
  // Colour bar.
  const double bx = ml + pw + 24;
  for (int k = 0; k < 50; ++k) {
    const double v = vmin + span * k / 49.0;
    o += "<rect x=\"" + detail::num(bx) + "\" y=\"" + detail::num(mt + ph - (k + 1) * ph / 50) +
         "\" width=\"18\" height=\"" + detail::num(ph / 50 + 0.3) + "\" fill=\"" + color(v) +
         "\"/>\n";
  }
  o += "<text x=\"" + detail::num(bx + 24) + "\" y=\"" + detail::num(mt + ph) +
       "\" font-family=\"sans-serif\" font-size=\"11\">" + detail::tick(vmin) + "</text>\n";
  o += "<text x=\"" + detail::num(bx + 24) + "\" y=\"" + detail::num(mt + 10) +
       "\" font-family=\"sans-serif\" font-size=\"11\">" + detail::tick(vmax) + "</text>\n";
  o += "</svg>\n";
  return o;
}

}  // namespace dinlab

#endif  // DINLAB_IO_HPP
