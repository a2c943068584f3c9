#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vortexflow/grid.hpp"

namespace vortexflow::app {

/// Minimal SVG line chart; non-finite points break the polyline.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::vector<double>& x, const std::vector<double>& y);

/// Heat map of a field on a viridis-like ramp, one rect per cell
/// (downsampled to at most 128 x 128 blocks).
std::string svg_heatmap(const std::string& title, const ScalarField& field);

}  // namespace vortexflow::app
