#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radialnet/model_table.hpp"

namespace radialnet {

enum class ArcExtentMode {
  /// extent = cursor / 2 after the feature's last line, as in the original drawing procedure.
  paper,
  /// Like `paper`, then widened so every feature point on the arc lies on it.
  cover_points,
};

std::string_view to_string(ArcExtentMode mode);
/// Accepts "paper" or "cover_points"; throws ConfigError otherwise.
ArcExtentMode parse_arc_extent_mode(std::string_view text);

struct LayoutConfig {
  double arc_spanning = 240.0;  // degrees, (0, 360]
  double canvas_width = 600.0;  // px
  std::optional<double> canvas_height;  // defaults to canvas_width
  ArcExtentMode arc_extent_mode = ArcExtentMode::cover_points;

  double height() const { return canvas_height.value_or(canvas_width); }
  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Angle in degrees (0 = +x axis, counterclockwise positive), radius in px.
struct PolarPoint {
  double angle = 0.0;
  double radius = 0.0;
  bool operator==(const PolarPoint&) const = default;
};

struct ArcRecord {
  std::size_t feature = 0;   // table feature index
  std::size_t position = 0;  // 1-based, 1 = innermost
  double radius = 0.0;
  double extent = 0.0;  // degrees swept from 0
  double performance = 0.0;
};

struct LineRecord {
  FeatureSubset subset;
  PolarPoint start;
  PolarPoint end;
  double performance = 0.0;
  /// Subset whose line (or arc, when a singleton) this line continues from.
  /// Empty when that intermediate model is absent from the table.
  std::optional<FeatureSubset> parent;
};

/// A line end point together with the arc (1-based position) it lies on.
struct FeaturePoint {
  std::size_t position = 0;
  PolarPoint point;
  bool operator==(const FeaturePoint&) const = default;
};

struct Layout {
  std::vector<std::string> feature_names;  // table order
  std::vector<ArcRecord> arcs;              // innermost first
  std::vector<LineRecord> lines;            // creation order
  FeatureOrder order;
  double angle_step = 0.0;
  double cursor_final = 0.0;
  LayoutConfig config;

  const LineRecord* find_line(FeatureSubset subset) const;
  const ArcRecord& arc_for_feature(std::size_t feature) const { return arcs.at(order.position_of(feature) - 1); }
  /// Names of a subset's members, outermost first.
  std::vector<std::string> path_names(FeatureSubset subset) const;
  /// Distinct line end points in first-seen order (line creation order, start before end).
  std::vector<FeaturePoint> feature_points() const;
};

/// Concentric arcs spaced canvas_width / (2N) apart, innermost = order position 1.
/// Every extent starts at arc_spanning.
std::vector<ArcRecord> arc_parameters(const FeatureOrder& order, const ModelTable& table, const LayoutConfig& config);

/// Angular increment between successive radial segments: 2 * spanning / (P - 1)
/// with P = 2^(n-1) - 1 end points on the outermost arc; spanning itself when P <= 1.
double angle_step(int n, double arc_spanning);

/// Mutable state threaded through line generation for one layout.
class LineBuilder {
 public:
  LineBuilder(const ModelTable& table, const FeatureOrder& order, const std::vector<ArcRecord>& arcs, double step,
              double cursor = 0.0);

  /// Generates (or returns the already generated) line for a subset of size >= 2,
  /// recursively placing any intermediate parent that has not been placed yet.
  /// Throws std::invalid_argument for subsets smaller than 2, ValidationError for
  /// members outside the table.
  const LineRecord& place(FeatureSubset subset);

  double cursor() const { return cursor_; }
  /// Lines for subsets present in the table, in creation order.
  std::vector<LineRecord> take_lines() &&;

 private:
  double radius_at(std::size_t position) const { return arcs_[position - 1].radius; }

  const ModelTable& table_;
  const FeatureOrder& order_;
  const std::vector<ArcRecord>& arcs_;
  double step_;
  double cursor_;
  // Geometry for every placed subset, including intermediates missing from the table.
  std::map<FeatureSubset, LineRecord> placed_;
  std::vector<FeatureSubset> emitted_;
};

Layout build_layout(const ModelTable& table, const LayoutConfig& config);

}  // namespace radialnet
