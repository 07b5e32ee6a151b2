#include <gtest/gtest.h>
#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include "radialnet/io.hpp"
#include "radialnet/service.hpp"
#include "test_support.hpp"

using namespace radialnet;
using nlohmann::json;
using Query = std::multimap<std::string, std::string>;

namespace {

LayoutService make_service() { return LayoutService(radialnet::testing::ranked_table(4)); }

}  // namespace

TEST(LayoutService, LayoutRoute) {
  auto svc = make_service();
  auto r = svc.handle("/api/layout", {});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.content_type, "application/json");
  auto doc = json::parse(r.body);
  EXPECT_TRUE(validate_layout_json(doc).empty());
  EXPECT_EQ(doc["lines"].size(), 11U);
  EXPECT_DOUBLE_EQ(doc["config"]["arc_spanning"].get<double>(), 240.0);
}

TEST(LayoutService, QueryOverridesDefaults) {
  auto svc = make_service();
  auto r = svc.handle("/api/layout", Query{{"spanning", "90"}, {"width", "800"}, {"mode", "paper"}});
  ASSERT_EQ(r.status, 200);
  auto doc = json::parse(r.body);
  EXPECT_DOUBLE_EQ(doc["config"]["arc_spanning"].get<double>(), 90.0);
  EXPECT_DOUBLE_EQ(doc["config"]["canvas_width"].get<double>(), 800.0);
  EXPECT_DOUBLE_EQ(doc["config"]["canvas_height"].get<double>(), 800.0);
  EXPECT_EQ(doc["config"]["arc_extent_mode"], "paper");
  EXPECT_TRUE(validate_layout_json(doc).empty());

  auto tall = json::parse(svc.handle("/api/layout", Query{{"width", "300"}, {"height", "500"}}).body);
  EXPECT_DOUBLE_EQ(tall["config"]["canvas_height"].get<double>(), 500.0);
  EXPECT_TRUE(validate_layout_json(tall).empty());
}

TEST(LayoutService, SvgTableImportanceAndIndex) {
  auto svc = make_service();
  auto svg = svc.handle("/api/svg", Query{{"spanning", "120"}});
  EXPECT_EQ(svg.status, 200);
  EXPECT_EQ(svg.content_type, "image/svg+xml");
  EXPECT_EQ(svg.body.rfind("<?xml", 0), 0U);

  auto table = svc.handle("/api/table", {});
  EXPECT_EQ(table.status, 200);
  EXPECT_EQ(parse_model_table(table.body).table, svc.table());

  auto imp = json::parse(svc.handle("/api/importance", {}).body);
  EXPECT_EQ(imp["importance"].size(), 4U);

  auto index = svc.handle("/", {});
  EXPECT_EQ(index.status, 200);
  EXPECT_NE(index.content_type.find("text/html"), std::string::npos);
}

TEST(LayoutService, BadQueriesAre400) {
  auto svc = make_service();
  const std::vector<Query> bad = {
      {{"spanning", "abc"}},  {{"spanning", "0"}},     {{"spanning", "361"}}, {{"spanning", "-10"}},
      {{"spanning", "nan"}},  {{"spanning", "12x"}},   {{"spanning", ""}},    {{"width", "0"}},
      {{"width", "-5"}},      {{"width", "1e9"}},      {{"height", "0"}},     {{"mode", "spiral"}},
      {{"spanning", "10"}, {"spanning", "20"}},
  };
  for (const auto& q : bad) {
    for (const char* route : {"/api/layout", "/api/svg"}) {
      auto r = svc.handle(route, q);
      EXPECT_EQ(r.status, 400) << route << " " << q.begin()->first << "=" << q.begin()->second;
      EXPECT_TRUE(json::parse(r.body).contains("error"));
    }
  }
}

TEST(LayoutService, UnknownRouteIs404) {
  auto svc = make_service();
  auto r = svc.handle("/api/nothing", {});
  EXPECT_EQ(r.status, 404);
  EXPECT_TRUE(json::parse(r.body).contains("error"));
}

TEST(LayoutService, UnknownParametersAreIgnored) {
  auto svc = make_service();
  EXPECT_EQ(svc.handle("/api/layout", Query{{"_", "12345"}}).body, svc.handle("/api/layout", {}).body);
}

TEST(LayoutService, RepeatedRequestsAreIdentical) {
  auto svc = make_service();
  const Query q{{"spanning", "200"}};
  EXPECT_EQ(svc.handle("/api/svg", q).body, svc.handle("/api/svg", q).body);
  EXPECT_EQ(svc.handle("/api/layout", q).body, svc.handle("/api/layout", q).body);
}

TEST(LayoutService, InvalidDefaultsAreRejected) {
  LayoutConfig cfg;
  cfg.arc_spanning = 0;
  EXPECT_THROW(LayoutService(radialnet::testing::ranked_table(2), cfg), ConfigError);
}

class HttpFixture : public ::testing::Test {
 protected:
  void start(const std::optional<std::filesystem::path>& dir = std::nullopt) {
    service_.bind(server_, dir);
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }
  httplib::Client client() { return httplib::Client("127.0.0.1", port_); }

  LayoutService service_{radialnet::testing::ranked_table(5)};
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(HttpFixture, EndToEnd) {
  start();
  auto cli = client();
  auto layout = cli.Get("/api/layout?spanning=180&width=500");
  ASSERT_TRUE(layout);
  EXPECT_EQ(layout->status, 200);
  auto doc = json::parse(layout->body);
  EXPECT_TRUE(validate_layout_json(doc).empty());
  EXPECT_EQ(doc["lines"].size(), 26U);

  auto svg = cli.Get("/api/svg");
  ASSERT_TRUE(svg);
  EXPECT_EQ(svg->status, 200);
  EXPECT_EQ(svg->get_header_value("Content-Type"), "image/svg+xml");

  auto bad = cli.Get("/api/layout?spanning=abc");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);

  auto missing = cli.Get("/api/unknown");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);

  auto elsewhere = cli.Get("/not/here");
  ASSERT_TRUE(elsewhere);
  EXPECT_EQ(elsewhere->status, 404);
  EXPECT_TRUE(json::parse(elsewhere->body).contains("error"));
}

TEST_F(HttpFixture, StaticDirectoryServesViewer) {
  const auto dir = std::filesystem::temp_directory_path() / "radialnet_static_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "index.html") << "<html>viewer</html>";
  start(dir);
  auto cli = client();
  auto page = cli.Get("/index.html");
  ASSERT_TRUE(page);
  EXPECT_EQ(page->status, 200);
  EXPECT_EQ(page->body, "<html>viewer</html>");
  auto api = cli.Get("/api/table");
  ASSERT_TRUE(api);
  EXPECT_EQ(api->status, 200);
  std::filesystem::remove_all(dir);
}
