#pragma once

#include <string>
#include <vector>

#include "radcal/types.hpp"

namespace radcal::sim {

struct PlotSeries {
  std::string name;
  RVector x;
  RVector y;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

struct BarPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::string> labels;
  RVector values;
};

/// values[row][col]; rows run bottom to top along the y axis.
struct HeatmapPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::string> x_ticks;
  std::vector<std::string> y_ticks;
  std::vector<RVector> values;
};

// Self-contained SVG documents. Non-finite samples are skipped.
std::string render_svg(const LinePlot& plot, int width = 760, int height = 440);
std::string render_svg(const BarPlot& plot, int width = 760, int height = 440);
std::string render_svg(const HeatmapPlot& plot, int width = 560, int height = 440);

}  // namespace radcal::sim
