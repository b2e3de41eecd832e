#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ptl/report.hpp"

// Minimal SVG charts (lines, scatter, grouped bars). Conveniences only; the
// CSV files carry the normative data.

namespace ptl::svg {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct BarGroup {
  std::string label;          // series name (one color per series)
  std::vector<double> values; // one per category
};

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  return colors[i % 6];
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

class Canvas {
 public:
  Canvas(std::string title, std::string xlabel, std::string ylabel, double xmin, double xmax, double ymin, double ymax,
         bool x_ticks = true)
      : xmin_(xmin), xmax_(xmax > xmin ? xmax : xmin + 1.0), ymin_(ymin), ymax_(ymax > ymin ? ymax : ymin + 1.0) {
    using report::fmt;
    body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
          << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
          << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
          << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
          << "</text>\n"
          << "<line x1=\"" << left << "\" y1=\"" << bottom() << "\" x2=\"" << right() << "\" y2=\"" << bottom()
          << "\" stroke=\"black\"/>\n"
          << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom()
          << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << (left + right()) / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">"
          << escape(xlabel) << "</text>\n"
          << "<text x=\"15\" y=\"" << (top + bottom()) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
          << (top + bottom()) / 2 << ")\">" << escape(ylabel) << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
      const double xv = xmin_ + (xmax_ - xmin_) * i / 4.0;
      const double yv = ymin_ + (ymax_ - ymin_) * i / 4.0;
      if (x_ticks)
        body_ << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << bottom() + 15 << "\" text-anchor=\"middle\">" << tick(xv)
              << "</text>\n";
      body_ << "<text x=\"" << left - 5 << "\" y=\"" << fmt(py(yv) + 4) << "\" text-anchor=\"end\">" << tick(yv)
            << "</text>\n";
    }
  }

  double px(double x) const { return left + (x - xmin_) / (xmax_ - xmin_) * (right() - left); }
  double py(double y) const { return bottom() - (y - ymin_) / (ymax_ - ymin_) * (bottom() - top); }

  void polyline(const std::vector<std::pair<double, double>>& pts, const char* color, bool dashed = false) {
    body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\""
          << (dashed ? " stroke-dasharray=\"6 3\"" : "") << " points=\"";
    for (const auto& [x, y] : pts) body_ << report::fmt(px(x)) << ',' << report::fmt(py(y)) << ' ';
    body_ << "\"/>\n";
  }

  void dots(const std::vector<std::pair<double, double>>& pts, const char* color, double r = 3.0) {
    for (const auto& [x, y] : pts)
      body_ << "<circle cx=\"" << report::fmt(px(x)) << "\" cy=\"" << report::fmt(py(y)) << "\" r=\"" << r
            << "\" fill=\"" << color << "\" fill-opacity=\"0.6\"/>\n";
  }

  void rect(double x0, double y0, double x1, double y1, const char* color) {
    using report::fmt;
    const double left_px = std::min(px(x0), px(x1)), top_px = std::min(py(y0), py(y1));
    body_ << "<rect x=\"" << fmt(left_px) << "\" y=\"" << fmt(top_px) << "\" width=\""
          << fmt(std::abs(px(x1) - px(x0))) << "\" height=\"" << fmt(std::abs(py(y1) - py(y0))) << "\" fill=\""
          << color << "\"/>\n";
  }

  void text(double x_px, double y_px, const std::string& s, const char* anchor = "middle") {
    body_ << "<text x=\"" << report::fmt(x_px) << "\" y=\"" << report::fmt(y_px) << "\" text-anchor=\"" << anchor
          << "\">" << escape(s) << "</text>\n";
  }

  void legend(const std::vector<std::string>& labels) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const double y = top + 15.0 * static_cast<double>(i);
      body_ << "<rect x=\"" << right() - 120 << "\" y=\"" << y - 9 << "\" width=\"10\" height=\"10\" fill=\""
            << palette(i) << "\"/>\n";
      text(right() - 105, y, labels[i], "start");
    }
  }

  std::string str() const { return body_.str() + "</svg>\n"; }

  static constexpr int width = 640;
  static constexpr int height = 420;
  static constexpr int left = 60;
  static constexpr int top = 40;
  static constexpr int right() { return width - 20; }
  static constexpr int bottom() { return height - 50; }

 private:
  static std::string tick(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
  }

  double xmin_, xmax_, ymin_, ymax_;
  std::ostringstream body_;
};

namespace detail {

inline void bounds(const std::vector<Series>& series, double& xmin, double& xmax, double& ymin, double& ymax) {
  bool first = true;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      xmin = first ? x : std::min(xmin, x);
      xmax = first ? x : std::max(xmax, x);
      ymin = first ? y : std::min(ymin, y);
      ymax = first ? y : std::max(ymax, y);
      first = false;
    }
  if (first) xmin = xmax = ymin = ymax = 0.0;
}

}  // namespace detail

inline std::string line_chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                              const std::vector<Series>& series) {
  double xmin, xmax, ymin, ymax;
  detail::bounds(series, xmin, xmax, ymin, ymax);
  Canvas c(title, xlabel, ylabel, xmin, xmax, std::min(0.0, ymin), ymax);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < series.size(); ++i) {
    c.polyline(series[i].points, palette(i));
    labels.push_back(series[i].label);
  }
  c.legend(labels);
  return c.str();
}

/// Scatter of each series, with `front` as a dashed line through the sorted front points.
inline std::string scatter_chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                                 const std::vector<Series>& series, std::vector<std::pair<double, double>> front) {
  double xmin, xmax, ymin, ymax;
  detail::bounds(series, xmin, xmax, ymin, ymax);
  const double px = (xmax - xmin) * 0.05, py = (ymax - ymin) * 0.05;
  Canvas c(title, xlabel, ylabel, xmin - px, xmax + px, ymin - py, ymax + py);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < series.size(); ++i) {
    c.dots(series[i].points, palette(i));
    labels.push_back(series[i].label);
  }
  std::sort(front.begin(), front.end());
  if (!front.empty()) c.polyline(front, "black", true);
  c.legend(labels);
  return c.str();
}

inline std::string bar_chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                             const std::vector<std::string>& categories, const std::vector<BarGroup>& groups) {
  double ymax = 0.0;
  for (const auto& g : groups)
    for (double v : g.values) ymax = std::max(ymax, v);
  const auto n = static_cast<double>(categories.size());
  Canvas c(title, xlabel, ylabel, 0.0, n, 0.0, ymax > 0.0 ? ymax * 1.1 : 1.0, false);
  const double slot = 0.8 / static_cast<double>(std::max<std::size_t>(1, groups.size()));
  std::vector<std::string> labels;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t k = 0; k < categories.size() && k < groups[g].values.size(); ++k) {
      const double x0 = static_cast<double>(k) + 0.1 + slot * static_cast<double>(g);
      c.rect(x0, 0.0, x0 + slot, groups[g].values[k], palette(g));
    }
    labels.push_back(groups[g].label);
  }
  for (std::size_t k = 0; k < categories.size(); ++k)
    c.text(c.px(static_cast<double>(k) + 0.5), Canvas::bottom() + 15, categories[k]);
  c.legend(labels);
  return c.str();
}

}  // namespace ptl::svg
