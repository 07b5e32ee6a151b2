// Acceptance checks. Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

#include <httplib.h>
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

#include "radialnet/encoding.hpp"
#include "radialnet/evaluator.hpp"
#include "radialnet/io.hpp"
#include "radialnet/layout.hpp"
#include "radialnet/service.hpp"
#include "radialnet/svg.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace radialnet;
using nlohmann::json;

namespace {

const std::string kCli = RADIALNET_CLI;
const std::string kSource = RADIALNET_SOURCE_DIR;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << what << "; ";
    ok = ok && cond;
  }
};

int failures = 0;

void report(const std::string& name, const std::function<void(Outcome&)>& check) {
  Outcome o;
  try {
    check(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail << "exception: " << e.what();
  }
  std::printf("%s %s: %s\n", o.ok ? "PASS" : "FAIL", name.c_str(), o.detail.str().c_str());
  std::fflush(stdout);
  if (!o.ok) ++failures;
}

// Independent order: best singleton first, ties by name.
std::vector<std::string> oracle_order(const ModelTable& t) {
  std::vector<std::string> names = t.features();
  std::stable_sort(names.begin(), names.end(), [&](const std::string& a, const std::string& b) {
    const double sa = t.performance(FeatureSubset::single(t.index_of(a))).value();
    const double sb = t.performance(FeatureSubset::single(t.index_of(b))).value();
    if (sa != sb) return sa > sb;
    return a < b;
  });
  return names;
}

// Members listed outermost first under the oracle order.
std::vector<std::string> oracle_path(const std::vector<std::string>& members, const std::vector<std::string>& order) {
  auto out = members;
  auto pos = [&](const std::string& f) { return std::find(order.begin(), order.end(), f) - order.begin(); };
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return pos(a) > pos(b); });
  return out;
}

int run_cli(const std::string& args) {
  const int rc = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void counting(Outcome& o) {
  const auto t0 = Clock::now();
  o.require(model_count(6) == 63 && model_count(7) == 127, "model_count");
  for (auto [file, expected] : {std::pair{"demo6.csv", 63U}, std::pair{"demo7.csv", 127U}}) {
    auto ds = load_csv(radialnet::testing::read_text(kSource + "/data/" + file), "label").dataset;
    const auto table = evaluate_all_subsets(ds, EvalConfig{});
    const auto layout = build_layout(table, LayoutConfig{});
    o.require(table.entries().size() == expected, std::string(file) + " model count");
    o.require(layout.lines.size() + layout.arcs.size() == expected, std::string(file) + " drawn count");
    o.detail << file << " -> " << table.entries().size() << " models; ";
  }
  const double dt = seconds_since(t0);
  o.require(dt < 1.0, "took longer than 1 s");
  o.detail << "time " << dt << " s";
}

void connectivity(Outcome& o) {
  const auto t0 = Clock::now();
  std::size_t walked = 0;
  for (int n = 2; n <= 8; ++n) {
    const auto table = radialnet::testing::random_table(static_cast<std::size_t>(n), 1000 + n);
    const auto layout = build_layout(table, LayoutConfig{});
    const auto order = oracle_order(table);
    const std::size_t expected_lines = (std::size_t{1} << n) - 1 - static_cast<std::size_t>(n);
    o.require(layout.lines.size() == expected_lines, "N=" + std::to_string(n) + " line count");

    std::map<double, std::string> feature_at_radius;
    for (const auto& a : layout.arcs) feature_at_radius[a.radius] = table.features()[a.feature];

    for (const auto& l : layout.lines) {
      const auto members = table.names_of(l.subset);
      // Walk inward through parent links; each hop must share the exact stored point.
      std::vector<std::string> walk{feature_at_radius.at(l.end.radius)};
      const LineRecord* cur = &l;
      while (true) {
        walk.push_back(feature_at_radius.at(cur->start.radius));
        if (!cur->parent || cur->parent->size() < 2) break;
        const auto* p = layout.find_line(*cur->parent);
        o.require(p != nullptr, "parent line missing for N=" + std::to_string(n));
        if (!p) break;
        o.require(p->end.angle == cur->start.angle && p->end.radius == cur->start.radius,
                  "start != parent end for N=" + std::to_string(n));
        cur = p;
      }
      o.require(walk == oracle_path(members, order), "walk mismatch for N=" + std::to_string(n));
      ++walked;
    }
  }
  const double dt = seconds_since(t0);
  o.require(dt < 5.0, "took longer than 5 s");
  o.detail << walked << " paths walked for N=2..8; time " << dt << " s";
}

void outer_points(Outcome& o) {
  for (int n = 3; n <= 8; ++n) {
    const auto layout = build_layout(radialnet::testing::random_table(static_cast<std::size_t>(n), 77 + n), LayoutConfig{});
    const double outer = layout.config.canvas_width / 2.0;
    std::size_t end_points = 0;
    for (const auto& l : layout.lines) {
      if (l.end.radius == outer) ++end_points;
    }
    const std::size_t expected = (std::size_t{1} << (n - 1)) - 1;
    o.require(end_points == expected, "N=" + std::to_string(n) + " has " + std::to_string(end_points));
    o.detail << n << ":" << end_points << " ";
  }
}

void hand_trace(Outcome& o) {
  LayoutConfig cfg;
  cfg.arc_spanning = 60;
  cfg.canvas_width = 600;
  cfg.arc_extent_mode = ArcExtentMode::paper;
  const auto layout = build_layout(radialnet::testing::ranked_table(3), cfg);
  struct Expect {
    FeatureSubset subset;
    double a0, r0, a1, r1;
  };
  const std::vector<Expect> expected = {
      {FeatureSubset::of({0, 1}), 60, 100, 60, 200},
      {FeatureSubset::of({0, 2}), 120, 100, 120, 300},
      {FeatureSubset::of({1, 2}), 180, 200, 180, 300},
      {FeatureSubset::of({0, 1, 2}), 60, 200, 60, 300},
  };
  o.require(layout.lines.size() == expected.size(), "line count");
  double worst = 0;
  for (const auto& e : expected) {
    const auto* l = layout.find_line(e.subset);
    o.require(l != nullptr, "missing line");
    if (!l) continue;
    worst = std::max({worst, std::abs(l->start.angle - e.a0), std::abs(l->end.angle - e.a1),
                      std::abs(l->start.radius - e.r0), std::abs(l->end.radius - e.r1)});
  }
  o.require(worst <= 1e-9, "deviation above 1e-9");
  o.detail << "max deviation " << worst;
}

void determinism(Outcome& o) {
  const auto dir = fs::temp_directory_path() / "radialnet_acceptance";
  fs::create_directories(dir);
  const auto table = kSource + "/data/demo6_table.json";
  auto p = [&](const char* name) { return (dir / name).string(); };
  o.require(run_cli("render " + table + " -o " + p("a.svg")) == 0, "render 1");
  o.require(run_cli("render " + table + " -o " + p("b.svg")) == 0, "render 2");
  o.require(run_cli("layout " + table + " -o " + p("a.json")) == 0, "layout 1");
  o.require(run_cli("layout " + table + " -o " + p("b.json")) == 0, "layout 2");
  const auto svg = radialnet::testing::read_text(p("a.svg"));
  const auto layout_json = radialnet::testing::read_text(p("a.json"));
  o.require(!svg.empty() && svg == radialnet::testing::read_text(p("b.svg")), "svg differs between runs");
  o.require(!layout_json.empty() && layout_json == radialnet::testing::read_text(p("b.json")),
            "layout differs between runs");
  o.require(svg == radialnet::testing::read_text(kSource + "/tests/golden/demo6.svg"), "svg differs from golden");
  o.detail << "svg " << svg.size() << " bytes, layout " << layout_json.size() << " bytes, golden matched";
  fs::remove_all(dir);
}

void encoding(Outcome& o) {
  EncodingConfig c;
  c.domain = ScoreDomain{0.0, 1.0};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.5, 1.5);
  int pairs = 0;
  for (; pairs < 1000; ++pairs) {
    const double a = u(rng), b = u(rng);
    const double wa = width_for(a, c), wb = width_for(b, c);
    if (a < b) o.require(wa <= wb, "width not monotone");
    if (a > b) o.require(wa >= wb, "width not monotone");
    for (double w : {wa, wb}) o.require(w >= c.width_min && w <= c.width_max, "width not clamped");
    const double lo_a = std::clamp(a, 0.0, 1.0), lo_b = std::clamp(b, 0.0, 1.0);
    if (lo_a < lo_b) o.require(wa < wb, "width not strictly monotone inside the domain");
  }
  o.require(colour_for(0.0, c).hex() == "#2166ac", "low endpoint");
  o.require(colour_for(1.0, c).hex() == "#b2182b", "high endpoint");
  o.require(colour_for(0.5, c).hex() == "#f7f7f7", "mid stop");
  o.require(width_for(0.0, c) == 1.0 && width_for(1.0, c) == 12.0, "width endpoints");
  o.detail << pairs << " pairs; endpoints and mid-stop exact";
}

void evaluator(Outcome& o) {
  const auto t0 = Clock::now();
  const std::vector<std::string> names{"signal", "n1", "n2", "n3", "n4", "n5"};
  const auto ds = make_synthetic_dataset(names, {10, 0, 0, 0, 0, 0}, 400, 2024);
  const auto table = evaluate_all_subsets(ds, EvalConfig{});
  o.require(table.entries().size() == 63, "subset count");
  double worst_signal = 1.0, worst_noise = 0.0;
  for (const auto& e : table.entries()) {
    if (e.subset.contains(0)) {
      worst_signal = std::min(worst_signal, e.performance);
    } else {
      worst_noise = std::max(worst_noise, std::abs(e.performance - 0.5));
    }
  }
  const double dt = seconds_since(t0);
  o.require(worst_signal >= 0.95, "informative subset below 0.95");
  o.require(worst_noise <= 0.15, "noise subset outside chance +/- 0.15");
  o.require(dt < 30.0, "took longer than 30 s");
  o.detail << "min informative " << worst_signal << ", max noise deviation " << worst_noise << ", time " << dt << " s";
}

void service(Outcome& o) {
  const LayoutService svc(parse_model_table(radialnet::testing::read_text(kSource + "/data/demo6_table.json")).table);
  httplib::Server server;
  svc.bind(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  o.require(port > 0, "bind");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> spanning(1.0, 360.0);
  std::uniform_real_distribution<double> width(100.0, 2000.0);
  int valid = 0;
  for (int i = 0; i < 20; ++i) {
    char url[128];
    const double s = spanning(rng), w = width(rng);
    std::snprintf(url, sizeof url, "/api/layout?spanning=%.3f&width=%.1f", s, w);
    auto res = client.Get(url);
    if (!res || res->status != 200) {
      o.require(false, std::string("request failed: ") + url);
      continue;
    }
    const auto doc = json::parse(res->body);
    const auto problems = validate_layout_json(doc);
    o.require(problems.empty(), std::string(url) + ": " + (problems.empty() ? "" : problems.front()));
    o.require(std::abs(doc["config"]["arc_spanning"].get<double>() - round3(s)) < 1e-9, "spanning not applied");
    if (problems.empty()) ++valid;
  }
  int rejected = 0;
  const std::vector<std::string> malformed = {"spanning=abc", "spanning=0",  "spanning=400", "width=-1",
                                              "width=",       "mode=spiral", "spanning=1&spanning=2"};
  for (const auto& q : malformed) {
    auto res = client.Get("/api/layout?" + q);
    const bool ok = res && res->status == 400;
    o.require(ok, "not rejected: " + q);
    if (ok) ++rejected;
  }
  server.stop();
  t.join();
  o.detail << valid << "/20 layouts valid, " << rejected << "/" << malformed.size() << " malformed queries -> 400";
}

}  // namespace

int main(int argc, char** argv) {
  // Optional argument: run a single criterion by key.
  const std::vector<std::tuple<std::string, std::string, void (*)(Outcome&)>> criteria = {
      {"counting", "counting 63/127 models", counting},
      {"connectivity", "layout connectivity N=2..8", connectivity},
      {"outer_points", "outer-arc point count N=3..8", outer_points},
      {"hand_trace", "three-feature hand trace", hand_trace},
      {"determinism", "render/layout determinism and golden SVG", determinism},
      {"encoding", "encoding properties", encoding},
      {"evaluator", "evaluator sanity", evaluator},
      {"service", "service contract", service},
  };
  const std::string only = argc > 1 ? argv[1] : "";
  int ran = 0;
  for (const auto& [key, name, fn] : criteria) {
    if (!only.empty() && key != only) continue;
    report(name, fn);
    ++ran;
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }
  std::printf("%d of %d criteria failed\n", failures, ran);
  return failures == 0 ? 0 : 1;
}
