#include "radialnet/io.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "radialnet/svg.hpp"

namespace radialnet {

using nlohmann::json;

double round3(double v) {
  const double r = std::round(v * 1000.0) / 1000.0;
  return r == 0.0 ? 0.0 : r;
}

ValidatedTable parse_model_table(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("model table is not valid JSON: ") + e.what());
  }
  return model_table_from_json(doc);
}

namespace {

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + " must be an array of feature names");
  std::vector<std::string> out;
  for (const auto& item : j) {
    if (!item.is_string()) throw ValidationError(where + " must contain only strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

ValidatedTable model_table_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("model table must be a JSON object");
  if (!doc.contains("features")) throw ValidationError("model table lacks \"features\"");
  if (!doc.contains("models")) throw ValidationError("model table lacks \"models\"");
  auto features = string_list(doc.at("features"), "\"features\"");
  const auto& models = doc.at("models");
  if (!models.is_array()) throw ValidationError("\"models\" must be an array");

  std::vector<RawEntry> entries;
  entries.reserve(models.size());
  for (std::size_t i = 0; i < models.size(); ++i) {
    const auto& m = models[i];
    const auto where = "models[" + std::to_string(i) + "]";
    if (!m.is_object() || !m.contains("features") || !m.contains("performance")) {
      throw ValidationError(where + " must be an object with \"features\" and \"performance\"");
    }
    if (!m.at("performance").is_number()) throw ValidationError(where + ".performance must be a number");
    entries.push_back({string_list(m.at("features"), where + ".features"), m.at("performance").get<double>()});
  }

  TableMeta meta;
  if (doc.contains("meta")) {
    const auto& jm = doc.at("meta");
    if (!jm.is_object()) throw ValidationError("\"meta\" must be an object");
    if (jm.contains("algorithm")) {
      if (!jm.at("algorithm").is_string()) throw ValidationError("meta.algorithm must be a string");
      meta.algorithm = jm.at("algorithm").get<std::string>();
    }
    if (jm.contains("dataset")) {
      if (!jm.at("dataset").is_string()) throw ValidationError("meta.dataset must be a string");
      meta.dataset = jm.at("dataset").get<std::string>();
    }
  }
  return validate_table(std::move(features), entries, std::move(meta));
}

json model_table_to_json(const ModelTable& table) {
  json doc;
  doc["features"] = table.features();
  json models = json::array();
  for (const auto& e : table.entries()) {
    models.push_back({{"features", table.names_of(e.subset)}, {"performance", e.performance}});
  }
  doc["models"] = std::move(models);
  if (!table.meta().algorithm.empty() || !table.meta().dataset.empty()) {
    doc["meta"] = {{"algorithm", table.meta().algorithm}, {"dataset", table.meta().dataset}};
  }
  return doc;
}

json layout_to_json(const Layout& layout, const EncodingConfig& enc_in) {
  const EncodingConfig enc = enc_in.resolved(layout);
  enc.validate();
  const auto& cfg = layout.config;
  const Point2 centre{cfg.canvas_width / 2.0, cfg.height() / 2.0};

  json doc;
  doc["config"] = {{"arc_spanning", round3(cfg.arc_spanning)},
                   {"canvas_width", round3(cfg.canvas_width)},
                   {"canvas_height", round3(cfg.height())},
                   {"arc_extent_mode", std::string(to_string(cfg.arc_extent_mode))}};
  json order = json::array();
  for (auto f : layout.order.features()) order.push_back(layout.feature_names.at(f));
  doc["order"] = std::move(order);
  doc["angle_step"] = round3(layout.angle_step);
  doc["cursor_final"] = round3(layout.cursor_final);

  json arcs = json::array();
  for (const auto& a : layout.arcs) {
    arcs.push_back({{"feature", layout.feature_names.at(a.feature)},
                    {"position", a.position},
                    {"radius", round3(a.radius)},
                    {"extent_deg", round3(a.extent)},
                    {"performance", round3(a.performance)},
                    {"width_px", round3(width_for(a.performance, enc))},
                    {"colour_hex", colour_for(a.performance, enc).hex()}});
  }
  doc["arcs"] = std::move(arcs);

  auto point = [&](const PolarPoint& p) {
    const auto xy = polar_to_cartesian(p.radius, p.angle, centre);
    return json{{"angle_deg", round3(p.angle)}, {"radius", round3(p.radius)}, {"x", round3(xy.x)}, {"y", round3(xy.y)}};
  };
  json lines = json::array();
  for (const auto& l : layout.lines) {
    lines.push_back({{"features", layout.path_names(l.subset)},
                     {"performance", round3(l.performance)},
                     {"start", point(l.start)},
                     {"end", point(l.end)},
                     {"width_px", round3(width_for(l.performance, enc))},
                     {"colour_hex", colour_for(l.performance, enc).hex()},
                     {"parent", l.parent ? json(layout.path_names(*l.parent)) : json(nullptr)}});
  }
  doc["lines"] = std::move(lines);

  json stops = json::array();
  for (const auto& s : enc.stops) stops.push_back({{"fraction", round3(s.fraction)}, {"colour_hex", s.colour.hex()}});
  doc["legend"] = {{"domain_low", round3(enc.domain->low)},
                   {"domain_high", round3(enc.domain->high)},
                   {"stops", std::move(stops)}};
  return doc;
}

json importance_to_json(const std::vector<FeatureImportance>& summary) {
  json arr = json::array();
  for (const auto& s : summary) {
    arr.push_back({{"feature", s.feature}, {"mean_performance", s.mean_performance}, {"model_count", s.model_count}});
  }
  return {{"importance", std::move(arr)}};
}

namespace {

class SchemaCheck {
 public:
  std::vector<std::string> problems;

  void fail(const std::string& where, const std::string& what) { problems.push_back(where + ": " + what); }

  const json* field(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
      fail(where, "missing \"" + key + "\"");
      return nullptr;
    }
    return &obj.at(key);
  }

  bool number(const json& obj, const std::string& key, const std::string& where, double& out) {
    const auto* v = field(obj, key, where);
    if (!v) return false;
    if (!v->is_number()) {
      fail(where, "\"" + key + "\" must be a number");
      return false;
    }
    out = v->get<double>();
    if (!std::isfinite(out)) {
      fail(where, "\"" + key + "\" must be finite");
      return false;
    }
    return true;
  }

  bool colour(const json& obj, const std::string& key, const std::string& where) {
    const auto* v = field(obj, key, where);
    if (!v) return false;
    bool ok = v->is_string();
    if (ok) {
      const auto s = v->get<std::string>();
      ok = s.size() == 7 && s[0] == '#' &&
           s.find_first_not_of("0123456789abcdef", 1) == std::string::npos;
    }
    if (!ok) fail(where, "\"" + key + "\" must be a lowercase #rrggbb colour");
    return ok;
  }
};

}  // namespace

std::vector<std::string> validate_layout_json(const json& doc) {
  SchemaCheck c;
  if (!doc.is_object()) {
    c.fail("$", "layout must be a JSON object");
    return c.problems;
  }

  double spanning = 0, width = 0, height = 0;
  if (const auto* cfg = c.field(doc, "config", "$")) {
    if (c.number(*cfg, "arc_spanning", "config", spanning) && (spanning <= 0 || spanning > 360)) {
      c.fail("config", "arc_spanning outside (0, 360]");
    }
    if (c.number(*cfg, "canvas_width", "config", width) && width <= 0) c.fail("config", "canvas_width must be > 0");
    if (c.number(*cfg, "canvas_height", "config", height) && height <= 0) c.fail("config", "canvas_height must be > 0");
    if (const auto* m = c.field(*cfg, "arc_extent_mode", "config")) {
      if (!m->is_string() || (*m != "paper" && *m != "cover_points")) c.fail("config", "unknown arc_extent_mode");
    }
  }
  double scratch = 0;
  c.number(doc, "angle_step", "$", scratch);
  c.number(doc, "cursor_final", "$", scratch);

  // Arcs: positions 1..N, evenly spaced radii.
  std::map<std::string, std::pair<int, double>> arc_by_name;  // name -> (position, radius)
  const auto* arcs = c.field(doc, "arcs", "$");
  if (arcs && !arcs->is_array()) c.fail("arcs", "must be an array");
  if (arcs && arcs->is_array()) {
    const auto n = arcs->size();
    std::set<int> positions;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& a = (*arcs)[i];
      const auto where = "arcs[" + std::to_string(i) + "]";
      const auto* name = c.field(a, "feature", where);
      if (name && (!name->is_string() || name->get<std::string>().empty())) c.fail(where, "feature must be a name");
      const auto* pos = c.field(a, "position", where);
      int position = 0;
      if (pos && (!pos->is_number_integer() || pos->get<int>() < 1 || pos->get<int>() > static_cast<int>(n))) {
        c.fail(where, "position must be an integer in 1..N");
      } else if (pos) {
        position = pos->get<int>();
        if (!positions.insert(position).second) c.fail(where, "duplicate position");
      }
      double radius = 0, extent = 0, perf = 0, stroke = 0;
      if (c.number(a, "radius", where, radius) && position > 0 && width > 0) {
        const double expected = position * width / (2.0 * static_cast<double>(n));
        if (std::abs(radius - expected) > 1e-3) c.fail(where, "radius is not position * canvas_width / (2N)");
      }
      if (c.number(a, "extent_deg", where, extent) && extent < 0) c.fail(where, "extent_deg must be >= 0");
      c.number(a, "performance", where, perf);
      if (c.number(a, "width_px", where, stroke) && stroke < 0) c.fail(where, "width_px must be >= 0");
      c.colour(a, "colour_hex", where);
      if (name && name->is_string()) {
        if (!arc_by_name.emplace(name->get<std::string>(), std::make_pair(position, radius)).second) {
          c.fail(where, "duplicate feature");
        }
      }
    }
  }

  // Lines: geometry consistent with arcs, outermost-first paths, parent continuity.
  struct LineGeom {
    double start_angle, start_radius, end_angle, end_radius;
  };
  std::map<std::vector<std::string>, LineGeom> line_by_path;
  std::vector<std::pair<std::string, std::vector<std::string>>> parents;
  std::vector<std::pair<std::string, LineGeom>> geoms;
  const auto* lines = c.field(doc, "lines", "$");
  if (lines && !lines->is_array()) c.fail("lines", "must be an array");
  if (lines && lines->is_array()) {
    const double cx = width / 2.0, cy = height / 2.0;
    for (std::size_t i = 0; i < lines->size(); ++i) {
      const auto& l = (*lines)[i];
      const auto where = "lines[" + std::to_string(i) + "]";
      std::vector<std::string> path;
      std::vector<int> path_pos;
      if (const auto* f = c.field(l, "features", where)) {
        bool ok = f->is_array() && f->size() >= 2;
        if (ok) {
          for (const auto& item : *f) {
            if (!item.is_string() || !arc_by_name.contains(item.get<std::string>())) {
              ok = false;
              break;
            }
            path.push_back(item.get<std::string>());
            path_pos.push_back(arc_by_name.at(path.back()).first);
          }
        }
        if (!ok) {
          c.fail(where, "features must list >= 2 known feature names");
          path.clear();
        }
        for (std::size_t k = 1; k < path_pos.size(); ++k) {
          if (path_pos[k] >= path_pos[k - 1]) {
            c.fail(where, "features are not ordered outermost first");
            break;
          }
        }
      }
      double perf = 0, stroke = 0;
      c.number(l, "performance", where, perf);
      if (c.number(l, "width_px", where, stroke) && stroke < 0) c.fail(where, "width_px must be >= 0");
      c.colour(l, "colour_hex", where);

      LineGeom g{};
      bool geom_ok = true;
      for (const char* end : {"start", "end"}) {
        const auto ew = where + "." + end;
        const auto* p = c.field(l, end, where);
        if (!p) {
          geom_ok = false;
          continue;
        }
        double ang = 0, rad = 0, x = 0, y = 0;
        const bool ok = c.number(*p, "angle_deg", ew, ang) & c.number(*p, "radius", ew, rad) &
                        c.number(*p, "x", ew, x) & c.number(*p, "y", ew, y);
        if (!ok) {
          geom_ok = false;
          continue;
        }
        const double theta = ang * std::numbers::pi / 180.0;
        const double ex = cx + rad * std::cos(theta);
        const double ey = cy - rad * std::sin(theta);
        // Each rounded input contributes at most half a unit in the third decimal.
        const double tol = 1e-3 + 5e-4 * (1.0 + std::abs(rad) * std::numbers::pi / 180.0);
        if (std::abs(ex - x) > tol || std::abs(ey - y) > tol) c.fail(ew, "x/y inconsistent with angle_deg/radius");
        if (std::string(end) == "start") {
          g.start_angle = ang;
          g.start_radius = rad;
        } else {
          g.end_angle = ang;
          g.end_radius = rad;
        }
      }
      if (geom_ok && !path.empty()) {
        if (std::abs(g.end_radius - arc_by_name.at(path.front()).second) > 1e-3) {
          c.fail(where, "end point is not on the outermost feature's arc");
        }
        if (std::abs(g.start_radius - arc_by_name.at(path[1]).second) > 1e-3) {
          c.fail(where, "start point is not on the next feature's arc");
        }
        if (!(g.start_radius < g.end_radius)) c.fail(where, "start radius must be below end radius");
        if (!line_by_path.emplace(path, g).second) c.fail(where, "duplicate line");
      }

      if (const auto* parent = c.field(l, "parent", where)) {
        if (!parent->is_null()) {
          std::vector<std::string> pp;
          bool ok = parent->is_array();
          if (ok) {
            for (const auto& item : *parent) {
              if (!item.is_string()) ok = false;
              else pp.push_back(item.get<std::string>());
            }
          }
          if (!ok || (!path.empty() && pp != std::vector<std::string>(path.begin() + 1, path.end()))) {
            c.fail(where, "parent must be null or the path without its outermost feature");
          } else if (!path.empty() && geom_ok) {
            parents.emplace_back(where, pp);
            geoms.emplace_back(where, g);
          }
        }
      }
    }
  }
  for (std::size_t i = 0; i < parents.size(); ++i) {
    const auto& [where, pp] = parents[i];
    if (pp.size() < 2) continue;
    auto it = line_by_path.find(pp);
    if (it == line_by_path.end()) {
      c.fail(where, "parent line is not in the layout");
      continue;
    }
    const auto& g = geoms[i].second;
    if (g.start_angle != it->second.end_angle || g.start_radius != it->second.end_radius) {
      c.fail(where, "start point does not coincide with the parent's end point");
    }
  }

  if (const auto* legend = c.field(doc, "legend", "$")) {
    double lo = 0, hi = 0;
    if (c.number(*legend, "domain_low", "legend", lo) & c.number(*legend, "domain_high", "legend", hi)) {
      if (!(lo < hi)) c.fail("legend", "domain_low must be below domain_high");
    }
    const auto* stops = c.field(*legend, "stops", "legend");
    if (stops && (!stops->is_array() || stops->size() < 2)) c.fail("legend", "stops must have at least two entries");
    if (stops && stops->is_array()) {
      double prev = -1;
      for (std::size_t i = 0; i < stops->size(); ++i) {
        const auto where = "legend.stops[" + std::to_string(i) + "]";
        double f = 0;
        if (c.number((*stops)[i], "fraction", where, f)) {
          if (f < 0 || f > 1 || f < prev) c.fail(where, "fractions must be sorted within [0, 1]");
          prev = f;
        }
        c.colour((*stops)[i], "colour_hex", where);
      }
    }
  }
  return c.problems;
}

}  // namespace radialnet
