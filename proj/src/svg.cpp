#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "mvmds/io.hpp"

namespace mvmds {

namespace {

constexpr double kWidth = 520.0;
constexpr double kHeight = 440.0;
constexpr double kPlotLeft = 60.0;
constexpr double kPlotTop = 40.0;
constexpr double kPlotSize = 340.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
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

struct Bounds {
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity();
  double y1 = -std::numeric_limits<double>::infinity();

  void add(double x, double y) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  // Pads each axis by 5% of its span, or by 1 when the span is zero.
  void pad() {
    const double dx = x1 - x0 > 0 ? 0.05 * (x1 - x0) : 1.0;
    const double dy = y1 - y0 > 0 ? 0.05 * (y1 - y0) : 1.0;
    x0 -= dx;
    x1 += dx;
    y0 -= dy;
    y1 += dy;
  }
};

void header(std::ostringstream& os, const std::string& title) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(kWidth)
     << "\" height=\"" << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' '
     << num(kHeight) << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
     << "\" fill=\"white\"/>\n";
  if (!title.empty()) {
    os << "<text class=\"title\" x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\""
       << " font-family=\"sans-serif\" font-size=\"15\">" << escape(title) << "</text>\n";
  }
  os << "<rect class=\"frame\" x=\"" << num(kPlotLeft) << "\" y=\"" << num(kPlotTop)
     << "\" width=\"" << num(kPlotSize) << "\" height=\"" << num(kPlotSize)
     << "\" fill=\"none\" stroke=\"#444\"/>\n";
}

void legend(std::ostringstream& os, const std::vector<std::pair<std::string, std::string>>& items) {
  double y = kPlotTop + 10.0;
  const double x = kPlotLeft + kPlotSize + 14.0;
  for (const auto& [label, color] : items) {
    os << "<rect class=\"legend-swatch\" x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"10\""
       << " height=\"10\" fill=\"" << escape(color) << "\"/>\n"
       << "<text class=\"legend\" x=\"" << num(x + 16) << "\" y=\"" << num(y + 9)
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(label) << "</text>\n";
    y += 18.0;
  }
}

void ticks(std::ostringstream& os, const Bounds& b, double sx, double sy) {
  // Three labelled ticks per axis: both ends and the middle.
  for (int t = 0; t <= 2; ++t) {
    const double fx = b.x0 + (b.x1 - b.x0) * t / 2.0;
    const double px = kPlotLeft + (fx - b.x0) * sx;
    os << "<text class=\"tick\" x=\"" << num(px) << "\" y=\"" << num(kPlotTop + kPlotSize + 14)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"9\">" << num(fx)
       << "</text>\n";
    const double fy = b.y0 + (b.y1 - b.y0) * t / 2.0;
    const double py = kPlotTop + kPlotSize - (fy - b.y0) * sy;
    os << "<text class=\"tick\" x=\"" << num(kPlotLeft - 4) << "\" y=\"" << num(py + 3)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"9\">" << num(fy)
       << "</text>\n";
  }
}

}  // namespace

const std::vector<std::string>& series_palette() {
  static const std::vector<std::string> palette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  return palette;
}

std::string render_scatter_svg(const std::vector<ScatterSeries>& series,
                               const std::vector<std::string>& point_labels,
                               const std::string& title) {
  if (series.empty()) throw Error(ErrorCode::EmptyInput, "scatter plot needs at least one series");
  Bounds b;
  for (const auto& s : series) {
    if (s.config.p() != 2) {
      throw Error(ErrorCode::WrongDimension,
                  "scatter plot needs 2-D configurations, got P = " + std::to_string(s.config.p()));
    }
    for (Eigen::Index i = 0; i < s.config.n(); ++i) b.add(s.config.x(i, 0), s.config.x(i, 1));
  }
  if (!point_labels.empty() &&
      static_cast<Eigen::Index>(point_labels.size()) != series.back().config.n()) {
    throw Error(ErrorCode::LengthMismatch, "point label count does not match the points");
  }
  if (series.front().config.n() == 0) b.add(0.0, 0.0);
  b.pad();
  // Equal scale on both axes keeps the geometry undistorted.
  const double scale = kPlotSize / std::max(b.x1 - b.x0, b.y1 - b.y0);
  const double cx = 0.5 * (b.x0 + b.x1), cy = 0.5 * (b.y0 + b.y1);
  const double half = 0.5 * kPlotSize / scale;
  b = Bounds{cx - half, cx + half, cy - half, cy + half};

  std::ostringstream os;
  header(os, title);
  ticks(os, b, scale, scale);
  auto px = [&](double x) { return kPlotLeft + (x - b.x0) * scale; };
  // Data y grows upwards; SVG y grows downwards.
  auto py = [&](double y) { return kPlotTop + kPlotSize - (y - b.y0) * scale; };

  for (const auto& s : series) {
    os << "<g class=\"series\">\n";
    for (Eigen::Index i = 0; i < s.config.n(); ++i) {
      os << "<circle cx=\"" << num(px(s.config.x(i, 0))) << "\" cy=\"" << num(py(s.config.x(i, 1)))
         << "\" r=\"5\" fill=\"" << escape(s.color) << "\" fill-opacity=\"0.85\"/>\n";
    }
    os << "</g>\n";
  }
  const auto& last = series.back().config;
  for (std::size_t i = 0; i < point_labels.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    os << "<text class=\"point-label\" x=\"" << num(px(last.x(r, 0)) + 7) << "\" y=\""
       << num(py(last.x(r, 1)) - 7) << "\" font-family=\"sans-serif\" font-size=\"11\">"
       << escape(point_labels[i]) << "</text>\n";
  }
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto& s : series) items.emplace_back(s.label, s.color);
  legend(os, items);
  os << "</svg>\n";
  return os.str();
}

void write_scatter_svg(const std::vector<ScatterSeries>& series, const std::filesystem::path& path,
                       const std::vector<std::string>& point_labels, const std::string& title) {
  write_text_file(path, render_scatter_svg(series, point_labels, title));
}

std::string render_line_svg(const std::vector<CurveSeries>& curves, const std::string& x_label,
                            const std::string& y_label, const std::string& title) {
  if (curves.empty()) throw Error(ErrorCode::EmptyInput, "line plot needs at least one curve");
  Bounds b;
  for (const auto& c : curves) {
    if (c.x.size() != c.y.size()) {
      throw Error(ErrorCode::LengthMismatch, "curve '" + c.label + "' has unequal x/y lengths");
    }
    for (std::size_t i = 0; i < c.x.size(); ++i) b.add(c.x[i], c.y[i]);
  }
  if (!std::isfinite(b.x0)) b.add(0.0, 0.0);
  b.pad();
  const double sx = kPlotSize / (b.x1 - b.x0);
  const double sy = kPlotSize / (b.y1 - b.y0);
  auto px = [&](double x) { return kPlotLeft + (x - b.x0) * sx; };
  auto py = [&](double y) { return kPlotTop + kPlotSize - (y - b.y0) * sy; };

  std::ostringstream os;
  header(os, title);
  ticks(os, b, sx, sy);
  os << "<text class=\"axis-label\" x=\"" << num(kPlotLeft + kPlotSize / 2) << "\" y=\""
     << num(kPlotTop + kPlotSize + 32) << "\" text-anchor=\"middle\" font-family=\"sans-serif\""
     << " font-size=\"12\">" << escape(x_label) << "</text>\n"
     << "<text class=\"axis-label\" x=\"14\" y=\"" << num(kPlotTop + kPlotSize / 2)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 14 "
     << num(kPlotTop + kPlotSize / 2) << ")\">" << escape(y_label) << "</text>\n";
  for (const auto& c : curves) {
    os << "<polyline fill=\"none\" stroke=\"" << escape(c.color) << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      if (i) os << ' ';
      os << num(px(c.x[i])) << ',' << num(py(c.y[i]));
    }
    os << "\"/>\n";
  }
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto& c : curves) items.emplace_back(c.label, c.color);
  legend(os, items);
  os << "</svg>\n";
  return os.str();
}

}  // namespace mvmds
