#pragma once

#include "dfpower/dynamics.hpp"

#include <string>
#include <vector>

namespace dfpower {

struct ChartSeries {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
  std::string color;
  bool dashed = false;
};

struct Chart {
  std::string title;
  std::string x_label = "issue s";
  std::string y_label = "social power x_i(s)";
  std::vector<ChartSeries> series;
};

/// Self-contained SVG line chart (axes, ticks, legend).
std::string render_svg(const Chart& chart, int width = 720, int height = 440);

/// One series per individual, labelled x_1 ... x_n.
Chart trajectory_chart(const TrajectoryTable& table, const std::string& title);

/// Selected individuals (1-based) from two runs: first run solid, second
/// dotted, same colour per individual.
Chart comparison_chart(const TrajectoryTable& solid, const std::string& solid_name,
                       const TrajectoryTable& dotted, const std::string& dotted_name,
                       const std::vector<Index>& individuals);

}  // namespace dfpower
