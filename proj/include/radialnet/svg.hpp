#pragma once

#include <string>
#include <vector>

#include "radialnet/encoding.hpp"
#include "radialnet/layout.hpp"

namespace radialnet {

struct RenderConfig {
  bool show_points = true;
  double label_font_size = 12.0;
  bool legend = true;
  int decimal_precision = 3;  // 1..6

  void validate() const;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Screen coordinates: y grows downward, angles counterclockwise from +x.
Point2 polar_to_cartesian(double radius, double angle_deg, Point2 centre);

/// Fixed-point text with exactly `precision` decimals; never emits "-0.000".
std::string format_fixed(double value, int precision);

/// Tooltip text carried by every arc and line: "features=[F4, F2, F1]; performance=0.873".
std::string model_title(const std::vector<std::string>& path_outermost_first, double performance, int precision);

/// Standalone SVG 1.1 document. Element order: arcs (inner to outer), lines (creation
/// order), feature points, labels, legend. Output depends only on the arguments.
std::string render_svg(const Layout& layout, const EncodingConfig& enc, const RenderConfig& rc = {});

}  // namespace radialnet
