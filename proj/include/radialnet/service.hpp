#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "radialnet/encoding.hpp"
#include "radialnet/layout.hpp"
#include "radialnet/model_table.hpp"
#include "radialnet/svg.hpp"

namespace httplib {
class Server;
}

namespace radialnet {

struct HttpReply {
  int status = 200;
  std::string content_type;
  std::string body;
};

/// Request routing for the layout service, independent of the socket layer.
/// The table and defaults are fixed at construction; every request recomputes
/// from them, so concurrent calls need no locking.
///
///   GET /api/layout?spanning=&width=&height=&mode=   layout JSON
///   GET /api/svg?spanning=&width=&height=&mode=      SVG document
///   GET /api/table                                   model-table JSON
///   GET /api/importance                              per-feature mean scores
///   GET /                                            viewer page
class LayoutService {
 public:
  explicit LayoutService(ModelTable table, LayoutConfig defaults = {}, EncodingConfig encoding = {},
                         RenderConfig render = {});

  HttpReply handle(const std::string& path, const std::multimap<std::string, std::string>& query) const;

  /// Registers the routes on an httplib server. With `static_dir`, files under it are
  /// served at / and take precedence over the built-in placeholder page.
  void bind(httplib::Server& server, const std::optional<std::filesystem::path>& static_dir = std::nullopt) const;

  const ModelTable& table() const { return table_; }

 private:
  LayoutConfig config_from(const std::multimap<std::string, std::string>& query) const;

  ModelTable table_;
  LayoutConfig defaults_;
  EncodingConfig encoding_;
  RenderConfig render_;
};

}  // namespace radialnet
