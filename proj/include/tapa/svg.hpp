#pragma once

#include <string>
#include <vector>

namespace tapa::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color;  // e.g. "#1f77b4"
};

struct PlotOptions {
  int width = 860;
  int height = 520;
  bool log_x = false;
  bool log_y = false;
  std::string title;
  std::string x_label;
  std::string y_label;
};

/// Self-contained static plot: axes, ticks, one polyline per series, legend.
/// Non-positive values are dropped on log axes.
std::string render_line_plot(const std::vector<Series>& series,
                             const PlotOptions& opts);

/// Histogram overlay as step outlines, one series per histogram.
Series histogram_series(const std::string& label,
                        const std::vector<double>& bin_edges,
                        const std::vector<long long>& counts,
                        const std::string& color);

}  // namespace tapa::svg
