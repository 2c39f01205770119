#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace sobolab::cli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
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

struct Axis {
  bool log = false;
  double lo = 0.0;
  double hi = 1.0;

  [[nodiscard]] double map(double v) const { return log ? std::log10(v) : v; }
  [[nodiscard]] double unmap(double v) const { return log ? std::pow(10.0, v) : v; }
  [[nodiscard]] bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
};

}  // namespace

std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                     const std::vector<PlotSeries>& series, bool log_x, bool log_y) {
  Axis ax{log_x, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  Axis ay{log_y, ax.lo, ax.hi};
  for (const auto& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!ax.usable(s.x[i]) || !ay.usable(s.y[i])) continue;
      ax.lo = std::min(ax.lo, ax.map(s.x[i]));
      ax.hi = std::max(ax.hi, ax.map(s.x[i]));
      ay.lo = std::min(ay.lo, ay.map(s.y[i]));
      ay.hi = std::max(ay.hi, ay.map(s.y[i]));
    }
  }
  if (!(ax.hi >= ax.lo)) ax.lo = 0.0, ax.hi = 1.0;
  if (!(ay.hi >= ay.lo)) ay.lo = 0.0, ay.hi = 1.0;
  if (ax.hi - ax.lo < 1e-12) ax.lo -= 0.5, ax.hi += 0.5;
  if (ay.hi - ay.lo < 1e-12) ay.lo -= 0.5, ay.hi += 0.5;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (ax.map(v) - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto py = [&](double v) { return kTop + ph - (ay.map(v) - ay.lo) / (ay.hi - ay.lo) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
    << "</text>\n";
  o << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(pw) << "\" height=\""
    << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = ax.lo + (ax.hi - ax.lo) * k / 4.0;
    const double fy = ay.lo + (ay.hi - ay.lo) * k / 4.0;
    const double x = kLeft + pw * k / 4.0;
    const double y = kTop + ph - ph * k / 4.0;
    o << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(kTop + ph + 16) << "\" text-anchor=\"middle\">"
      << tick(ax.unmap(fx)) << "</text>\n";
    o << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\">"
      << tick(ay.unmap(fy)) << "</text>\n";
  }
  o << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kHeight - 10) << "\" text-anchor=\"middle\">"
    << escape(x_label) << "</text>\n";
  o << "<text x=\"16\" y=\"" << fmt(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << fmt(kTop + ph / 2) << ")\">" << escape(y_label) << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kColors[si % 5];
    std::ostringstream pts;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!ax.usable(s.x[i]) || !ay.usable(s.y[i])) continue;
      if (s.markers) {
        o << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i])) << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";
      } else {
        pts << fmt(px(s.x[i])) << "," << fmt(py(s.y[i])) << " ";
      }
    }
    if (!s.markers) {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts.str()
        << "\"/>\n";
    }
    o << "<text x=\"" << fmt(kLeft + 10) << "\" y=\"" << fmt(kTop + 16 + 14 * si) << "\" fill=\"" << color << "\">"
      << escape(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace sobolab::cli
