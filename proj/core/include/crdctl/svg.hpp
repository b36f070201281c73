#pragma once
#include <string>
#include <vector>

#include "crdctl/simulator.hpp"

namespace crdctl {

struct LinePlotStyle {
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  bool log_y = false;
};

/// Self-contained SVG line plot of (x, y) samples. A single sample renders as
/// one marker. Throws std::invalid_argument on empty or mismatched data.
std::string svg_line_plot(const std::vector<double>& xs, const std::vector<double>& ys,
                          const LinePlotStyle& style);

/// Space-time heat map of the state built from rectangles, one per
/// (snapshot, node) cell, downsampled to at most ~200 cells per axis.
/// Throws std::invalid_argument on empty data.
std::string svg_heatmap(const std::vector<Snapshot>& snapshots, const Grid& grid,
                        const std::string& title);

}  // namespace crdctl
