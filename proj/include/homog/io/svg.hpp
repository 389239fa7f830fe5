#pragma once

// Self-contained SVG 1.1 figures, one per file.

#include <filesystem>
#include <string>
#include <vector>

#include "homog/convergence.hpp"

namespace homog::io {

struct Polyline {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Log-log scatter of every series with its fitted line and a legend.
/// PreconditionError when there is nothing to plot.
std::string render_convergence_svg(const ConvergenceReport& report);

/// Linear-axis overlay of the given polylines. PreconditionError when empty.
std::string render_lines_svg(const std::string& title, const std::vector<Polyline>& lines);

/// Writes `svg` to `path`; I/O failures raise Error naming the path.
void write_svg(const std::string& svg, const std::filesystem::path& path);

}  // namespace homog::io
