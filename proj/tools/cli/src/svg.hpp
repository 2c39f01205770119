#pragma once

#include <string>
#include <vector>

namespace sobolab::cli {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  // points instead of a polyline
};

/// Minimal standalone SVG line/scatter plot. Log axes drop nonpositive values.
std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                     const std::vector<PlotSeries>& series, bool log_x, bool log_y);

}  // namespace sobolab::cli
