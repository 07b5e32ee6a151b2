#include "radialnet/layout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>
#include <utility>

namespace radialnet {

std::string_view to_string(ArcExtentMode mode) {
  switch (mode) {
    case ArcExtentMode::paper:
      return "paper";
    case ArcExtentMode::cover_points:
      return "cover_points";
  }
  return "cover_points";
}

ArcExtentMode parse_arc_extent_mode(std::string_view text) {
  if (text == "paper") return ArcExtentMode::paper;
  if (text == "cover_points") return ArcExtentMode::cover_points;
  throw ConfigError("arc extent mode must be 'paper' or 'cover_points', got '" + std::string(text) + "'");
}

void LayoutConfig::validate() const {
  if (!std::isfinite(arc_spanning) || arc_spanning <= 0.0 || arc_spanning > 360.0) {
    throw ConfigError("spanning angle must be in (0, 360] degrees");
  }
  if (!std::isfinite(canvas_width) || canvas_width <= 0.0) throw ConfigError("canvas width must be positive");
  if (canvas_height && (!std::isfinite(*canvas_height) || *canvas_height <= 0.0)) {
    throw ConfigError("canvas height must be positive");
  }
}

const LineRecord* Layout::find_line(FeatureSubset subset) const {
  auto it = std::find_if(lines.begin(), lines.end(), [&](const LineRecord& l) { return l.subset == subset; });
  return it == lines.end() ? nullptr : &*it;
}

std::vector<std::string> Layout::path_names(FeatureSubset subset) const {
  std::vector<std::string> out;
  for (auto f : canonical_path(subset, order).outermost_first) out.push_back(feature_names.at(f));
  return out;
}

std::vector<FeaturePoint> Layout::feature_points() const {
  std::vector<FeaturePoint> out;
  std::set<std::tuple<std::size_t, double, double>> seen;
  auto add = [&](FeaturePoint p) {
    if (seen.emplace(p.position, p.point.angle, p.point.radius).second) out.push_back(p);
  };
  for (const auto& line : lines) {
    const auto outer = order.outermost(line.subset);
    const auto inner = order.outermost(line.subset.without(outer));
    add({order.position_of(inner), line.start});
    add({order.position_of(outer), line.end});
  }
  return out;
}

std::vector<ArcRecord> arc_parameters(const FeatureOrder& order, const ModelTable& table, const LayoutConfig& config) {
  const auto n = order.size();
  const double spacing = config.canvas_width / (2.0 * static_cast<double>(n));
  std::vector<ArcRecord> arcs;
  arcs.reserve(n);
  for (std::size_t pos = 1; pos <= n; ++pos) {
    const auto f = order.feature_at(pos);
    arcs.push_back({f, pos, static_cast<double>(pos) * spacing, config.arc_spanning, table.singleton_performance(f)});
  }
  return arcs;
}

double angle_step(int n, double arc_spanning) {
  if (n < 1) throw std::invalid_argument("angle_step: n must be >= 1");
  const auto points = model_count(n) >> 1;  // 2^(n-1) - 1
  if (points <= 1) return arc_spanning;
  return 2.0 * arc_spanning / static_cast<double>(points - 1);
}

LineBuilder::LineBuilder(const ModelTable& table, const FeatureOrder& order, const std::vector<ArcRecord>& arcs,
                         double step, double cursor)
    : table_(table), order_(order), arcs_(arcs), step_(step), cursor_(cursor) {}

const LineRecord& LineBuilder::place(FeatureSubset subset) {
  if (subset.size() < 2) throw std::invalid_argument("a model line needs at least two features");
  for (auto f : subset.indices()) {
    if (f >= table_.feature_count()) {
      throw ValidationError("feature index " + std::to_string(f) + " is not in the model table");
    }
  }
  if (auto it = placed_.find(subset); it != placed_.end()) return it->second;

  const auto outer = order_.outermost(subset);
  const auto outer_pos = order_.position_of(outer);
  const auto parent = subset.without(outer);

  LineRecord rec;
  rec.subset = subset;
  rec.performance = table_.performance(subset).value_or(std::numeric_limits<double>::quiet_NaN());

  if (parent.size() == 1) {
    // Radial segment between the two arcs at a fresh angle.
    cursor_ += step_;
    rec.start = {cursor_, radius_at(order_.position_of(parent.indices().front()))};
    rec.end = {cursor_, radius_at(outer_pos)};
    rec.parent = parent;
  } else {
    const LineRecord& from = place(parent);
    const auto gap = outer_pos - order_.position_of(order_.outermost(parent));
    rec.start = from.end;
    rec.end = {rec.start.angle + step_ * static_cast<double>(gap - 1), radius_at(outer_pos)};
    cursor_ = std::max(cursor_, rec.end.angle);
    if (table_.contains(parent)) rec.parent = parent;
  }

  auto [it, inserted] = placed_.emplace(subset, rec);
  if (table_.contains(subset)) emitted_.push_back(subset);
  return it->second;
}

std::vector<LineRecord> LineBuilder::take_lines() && {
  std::vector<LineRecord> out;
  out.reserve(emitted_.size());
  for (auto s : emitted_) out.push_back(std::move(placed_.at(s)));
  return out;
}

Layout build_layout(const ModelTable& table, const LayoutConfig& config) {
  config.validate();
  Layout layout;
  layout.config = config;
  layout.feature_names = table.features();
  layout.order = canonical_order(table);
  layout.arcs = arc_parameters(layout.order, table, config);

  const auto n = layout.order.size();
  layout.angle_step = angle_step(static_cast<int>(n), config.arc_spanning);

  // Multi-feature models grouped by outermost position; within a group, ordered as
  // a binary counter over the inner positions.
  std::vector<std::vector<std::pair<std::uint64_t, FeatureSubset>>> groups(n + 1);
  for (const auto& e : table.entries()) {
    if (e.subset.size() < 2) continue;
    const auto outer = layout.order.outermost(e.subset);
    std::uint64_t inner_mask = 0;
    for (auto f : e.subset.without(outer).indices()) inner_mask |= std::uint64_t{1} << (layout.order.position_of(f) - 1);
    groups[layout.order.position_of(outer)].emplace_back(inner_mask, e.subset);
  }

  LineBuilder builder(table, layout.order, layout.arcs, layout.angle_step);
  for (std::size_t pos = 1; pos <= n; ++pos) {
    auto& group = groups[pos];
    if (group.empty()) continue;
    std::sort(group.begin(), group.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [mask, subset] : group) builder.place(subset);
    layout.arcs[pos - 1].extent = builder.cursor() / 2.0;
  }
  layout.cursor_final = builder.cursor();
  layout.lines = std::move(builder).take_lines();

  if (config.arc_extent_mode == ArcExtentMode::cover_points) {
    for (const auto& p : layout.feature_points()) {
      auto& arc = layout.arcs[p.position - 1];
      arc.extent = std::max(arc.extent, p.point.angle);
    }
  }
  return layout;
}

}  // namespace radialnet
