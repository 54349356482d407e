#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netad/stochastic.hpp"

namespace netad {

/// A window-score time series: score curve, dashed threshold line and
/// markers at flagged windows. Non-finite values break the lines.
struct SeriesPlot {
  std::string title;
  std::string x_label = "time (s)";
  std::string y_label = "score";
  std::vector<double> x;
  std::vector<double> score;
  std::vector<double> threshold;
  std::vector<bool> flagged;
  std::optional<std::pair<double, double>> shaded;  // e.g. the anomaly interval
};

SeriesPlot plot_from_verdicts(std::span<const WindowVerdict> verdicts, std::string title);

/// Self-contained SVG 1.1 document; identical input gives identical bytes.
std::string render_svg(const SeriesPlot& plot);
void write_svg_file(const std::string& path, const SeriesPlot& plot);

}  // namespace netad
