#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "radialnet/encoding.hpp"
#include "radialnet/layout.hpp"
#include "radialnet/model_table.hpp"

namespace radialnet {

// Model-table file:
//   {"features": [name...],
//    "models": [{"features": [name...], "performance": number}...],
//    "meta": {"algorithm": text, "dataset": text}}      (meta optional)

/// Throws ValidationError for malformed JSON, schema violations and table validation failures.
ValidatedTable parse_model_table(std::string_view text);
ValidatedTable model_table_from_json(const nlohmann::json& doc);
/// Models are listed in canonical subset order with names in table order.
nlohmann::json model_table_to_json(const ModelTable& table);

/// Layout file (all coordinates rounded to 3 decimals, object keys sorted):
///   config {arc_spanning, canvas_width, canvas_height, arc_extent_mode}, order, angle_step,
///   cursor_final, arcs [{feature, position, radius, extent_deg, performance, width_px, colour_hex}],
///   lines [{features (outermost first), performance, start {angle_deg, radius, x, y}, end {...},
///           width_px, colour_hex, parent (outermost-first names or null)}],
///   legend {domain_low, domain_high, stops [{fraction, colour_hex}]}
nlohmann::json layout_to_json(const Layout& layout, const EncodingConfig& enc);

/// Structural and geometric check of a layout document. Returns one message per
/// problem; empty means valid.
std::vector<std::string> validate_layout_json(const nlohmann::json& doc);

nlohmann::json importance_to_json(const std::vector<FeatureImportance>& summary);

/// Rounds to 3 decimals, mapping -0 to 0.
double round3(double v);

}  // namespace radialnet
