#include "radialnet/service.hpp"

#include <httplib.h>

#include <charconv>
#include <cmath>

#include "radialnet/io.hpp"

namespace radialnet {

namespace {

constexpr double kMaxCanvas = 20000.0;

constexpr const char* kPlaceholderPage = R"(<!DOCTYPE html>
<html><head><meta charset="utf-8"><title>RadialNet</title></head>
<body>
<h1>RadialNet layout service</h1>
<ul>
<li><a href="/api/svg">/api/svg</a> (query: spanning, width, height, mode)</li>
<li><a href="/api/layout">/api/layout</a></li>
<li><a href="/api/table">/api/table</a></li>
<li><a href="/api/importance">/api/importance</a></li>
</ul>
</body></html>
)";

class BadRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

HttpReply json_reply(int status, const nlohmann::json& body) {
  return {status, "application/json", body.dump(2) + "\n"};
}

HttpReply error_reply(int status, const std::string& message) {
  return json_reply(status, {{"error", message}});
}

double parse_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw BadRequest("query parameter '" + key + "' must be a number, got '" + text + "'");
  }
  return v;
}

const std::string* single(const std::multimap<std::string, std::string>& query, const std::string& key) {
  const auto count = query.count(key);
  if (count == 0) return nullptr;
  if (count > 1) throw BadRequest("query parameter '" + key + "' given more than once");
  return &query.find(key)->second;
}

}  // namespace

LayoutService::LayoutService(ModelTable table, LayoutConfig defaults, EncodingConfig encoding, RenderConfig render)
    : table_(std::move(table)), defaults_(defaults), encoding_(std::move(encoding)), render_(render) {
  defaults_.validate();
  render_.validate();
}

LayoutConfig LayoutService::config_from(const std::multimap<std::string, std::string>& query) const {
  LayoutConfig cfg = defaults_;
  if (const auto* s = single(query, "spanning")) {
    cfg.arc_spanning = parse_number("spanning", *s);
    if (cfg.arc_spanning <= 0.0 || cfg.arc_spanning > 360.0) throw BadRequest("spanning must be in (0, 360]");
  }
  if (const auto* s = single(query, "width")) {
    cfg.canvas_width = parse_number("width", *s);
    if (cfg.canvas_width <= 0.0 || cfg.canvas_width > kMaxCanvas) throw BadRequest("width must be in (0, 20000]");
    if (!query.contains("height")) cfg.canvas_height.reset();
  }
  if (const auto* s = single(query, "height")) {
    cfg.canvas_height = parse_number("height", *s);
    if (*cfg.canvas_height <= 0.0 || *cfg.canvas_height > kMaxCanvas) throw BadRequest("height must be in (0, 20000]");
  }
  if (const auto* s = single(query, "mode")) {
    try {
      cfg.arc_extent_mode = parse_arc_extent_mode(*s);
    } catch (const ConfigError& e) {
      throw BadRequest(e.what());
    }
  }
  return cfg;
}

HttpReply LayoutService::handle(const std::string& path, const std::multimap<std::string, std::string>& query) const {
  try {
    if (path == "/api/layout") {
      const auto layout = build_layout(table_, config_from(query));
      return json_reply(200, layout_to_json(layout, encoding_));
    }
    if (path == "/api/svg") {
      const auto layout = build_layout(table_, config_from(query));
      return {200, "image/svg+xml", render_svg(layout, encoding_, render_)};
    }
    if (path == "/api/table") return json_reply(200, model_table_to_json(table_));
    if (path == "/api/importance") return json_reply(200, importance_to_json(feature_importance_summary(table_)));
    if (path == "/" || path == "/index.html") return {200, "text/html; charset=utf-8", kPlaceholderPage};
    return error_reply(404, "no such resource: " + path);
  } catch (const BadRequest& e) {
    return error_reply(400, e.what());
  } catch (const ConfigError& e) {
    return error_reply(400, e.what());
  } catch (const std::exception& e) {
    return error_reply(500, e.what());
  }
}

void LayoutService::bind(httplib::Server& server, const std::optional<std::filesystem::path>& static_dir) const {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    std::multimap<std::string, std::string> query(req.params.begin(), req.params.end());
    const auto reply = handle(req.path, query);
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
  };
  if (static_dir) server.set_mount_point("/", static_dir->string());
  server.Get(R"(/api/.*)", forward);
  server.Get("/", forward);
  server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) {
      res.set_content(nlohmann::json{{"error", "no such resource: " + req.path}}.dump(2) + "\n", "application/json");
    }
  });
}

}  // namespace radialnet
