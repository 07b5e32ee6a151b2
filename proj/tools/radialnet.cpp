// radialnet: command-line front end for layout, rendering, subset evaluation and the layout service.
//
// Exit codes: 0 success, 1 validation or I/O failure, 2 usage error.

#include <CLI11.hpp>
#include <httplib.h>

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "radialnet/evaluator.hpp"
#include "radialnet/io.hpp"
#include "radialnet/layout.hpp"
#include "radialnet/service.hpp"
#include "radialnet/svg.hpp"

namespace {

using namespace radialnet;

constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out.flush()) throw IoError("failed writing '" + path + "'");
}

ModelTable load_table(const std::string& path) {
  auto validated = parse_model_table(read_file(path));
  for (const auto& w : validated.warnings) std::cerr << "warning: " << w << '\n';
  return std::move(validated.table);
}

struct LayoutFlags {
  double spanning = 240.0;
  double canvas = 600.0;
  std::optional<double> height;
  std::string mode = "cover_points";
  std::vector<double> domain;
  std::vector<double> width_range;

  void add_to(CLI::App& cmd) {
    auto positive = CLI::Validator(
        [](std::string& s) -> std::string {
          try {
            if (std::stod(s) > 0.0) return {};
          } catch (const std::exception&) {
          }
          return "value must be a positive number";
        },
        "POSITIVE");
    auto spanning_range = CLI::Validator(
        [](std::string& s) -> std::string {
          try {
            const double v = std::stod(s);
            if (v > 0.0 && v <= 360.0) return {};
          } catch (const std::exception&) {
          }
          return "spanning must be in (0, 360] degrees";
        },
        "(0,360]");
    cmd.add_option("--spanning", spanning, "Spanning angle in degrees")->check(spanning_range)->capture_default_str();
    cmd.add_option("--canvas", canvas, "Canvas width in px")->check(positive)->capture_default_str();
    cmd.add_option("--height", height, "Canvas height in px (default: canvas width)")->check(positive);
    cmd.add_option("--mode", mode, "Arc extent mode")
        ->check(CLI::IsMember({"paper", "cover_points"}))
        ->capture_default_str();
    cmd.add_option("--domain", domain, "Fixed score domain LOW HIGH (default: observed range)")->expected(2);
    cmd.add_option("--width-range", width_range, "Stroke width range MIN MAX in px")->expected(2);
  }

  LayoutConfig layout_config() const {
    LayoutConfig cfg;
    cfg.arc_spanning = spanning;
    cfg.canvas_width = canvas;
    cfg.canvas_height = height;
    cfg.arc_extent_mode = parse_arc_extent_mode(mode);
    cfg.validate();
    return cfg;
  }

  EncodingConfig encoding() const {
    EncodingConfig enc;
    if (domain.size() == 2) enc.domain = ScoreDomain{domain[0], domain[1]};
    if (width_range.size() == 2) {
      enc.width_min = width_range[0];
      enc.width_max = width_range[1];
    }
    return enc;
  }
};

volatile std::sig_atomic_t g_stop = 0;
httplib::Server* g_server = nullptr;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RadialNet chart layout, rendering and feature-subset evaluation"};
  app.require_subcommand(1);

  LayoutFlags render_flags;
  std::string render_input;
  std::string render_output;
  RenderConfig rc;
  bool no_points = false;
  bool no_legend = false;
  auto* render = app.add_subcommand("render", "Render a model-table JSON file to SVG");
  render->add_option("input", render_input, "Model-table JSON file")->required();
  render->add_option("-o,--output", render_output, "SVG output path")->required();
  render_flags.add_to(*render);
  render->add_flag("--no-points", no_points, "Omit feature-point markers");
  render->add_flag("--no-legend", no_legend, "Omit the colour-scale legend");
  render->add_option("--precision", rc.decimal_precision, "Decimals in numeric attributes")
      ->check(CLI::Range(1, 6))
      ->capture_default_str();
  render->add_option("--font-size", rc.label_font_size, "Label font size in px")->capture_default_str();

  LayoutFlags layout_flags;
  std::string layout_input;
  std::string layout_output;
  auto* layout_cmd = app.add_subcommand("layout", "Compute the chart layout as JSON");
  layout_cmd->add_option("input", layout_input, "Model-table JSON file")->required();
  layout_cmd->add_option("-o,--output", layout_output, "Output path (default: standard output)");
  layout_flags.add_to(*layout_cmd);

  std::string eval_dataset;
  std::string eval_label;
  std::string eval_output;
  EvalConfig ec;
  bool allow_many = false;
  bool no_standardize = false;
  auto* eval = app.add_subcommand("eval", "Score every feature subset of a CSV dataset with k-NN");
  eval->add_option("--dataset", eval_dataset, "CSV file with a header row")->required();
  eval->add_option("--label", eval_label, "Label column name")->required();
  eval->add_option("--output,-o", eval_output, "Model-table JSON output path")->required();
  eval->add_option("--k", ec.k_neighbours, "Neighbours")->check(CLI::PositiveNumber)->capture_default_str();
  eval->add_option("--folds", ec.folds, "Cross-validation folds")->check(CLI::Range(2, 1000000))->capture_default_str();
  eval->add_option("--seed", ec.seed, "Fold shuffle seed")->capture_default_str();
  eval->add_option("--max-features", ec.max_features, "Feature-count guard")->check(CLI::PositiveNumber)->capture_default_str();
  eval->add_flag("--allow-many-features", allow_many, "Ignore the feature-count guard");
  eval->add_flag("--no-standardize", no_standardize, "Use raw feature values");
  eval->add_option("--threads", ec.threads, "Worker threads (0 = all cores)")->capture_default_str();

  std::string serve_input;
  std::string serve_host = "127.0.0.1";
  int serve_port = 8080;
  std::string static_dir;
  auto* serve = app.add_subcommand("serve", "Serve layouts over HTTP");
  serve->add_option("--input", serve_input, "Model-table JSON file")->required();
  serve->add_option("--port", serve_port, "TCP port")->check(CLI::Range(1, 65535))->capture_default_str();
  serve->add_option("--host", serve_host, "Bind address")->capture_default_str();
  serve->add_option("--static-dir", static_dir, "Directory with viewer assets served at /")->check(CLI::ExistingDirectory);

  std::string importance_input;
  auto* importance = app.add_subcommand("importance", "Print mean performance per feature");
  importance->add_option("input", importance_input, "Model-table JSON file")->required();

  std::vector<std::string> synth_names;
  std::vector<double> synth_separations;
  std::size_t synth_rows = 400;
  std::uint64_t synth_seed = 7;
  std::string synth_output;
  auto* synth = app.add_subcommand("synth", "Write a synthetic two-class CSV dataset");
  synth->add_option("--features", synth_names, "Feature names")->delimiter(',')->required();
  synth->add_option("--separations", synth_separations, "Class separation per feature (0 = pure noise)")
      ->delimiter(',')
      ->required();
  synth->add_option("--rows", synth_rows, "Row count")->check(CLI::Range(2, 10000000))->capture_default_str();
  synth->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();
  synth->add_option("-o,--output", synth_output, "CSV output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*render) {
      const auto table = load_table(render_input);
      rc.show_points = !no_points;
      rc.legend = !no_legend;
      const auto layout = build_layout(table, render_flags.layout_config());
      write_file(render_output, render_svg(layout, render_flags.encoding(), rc));
    } else if (*layout_cmd) {
      const auto table = load_table(layout_input);
      const auto layout = build_layout(table, layout_flags.layout_config());
      const auto text = layout_to_json(layout, layout_flags.encoding()).dump(2) + "\n";
      if (layout_output.empty()) {
        std::cout << text;
      } else {
        write_file(layout_output, text);
      }
    } else if (*eval) {
      auto loaded = load_csv(read_file(eval_dataset), eval_label);
      for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
      if (loaded.rejected_rows) std::cerr << "warning: " << loaded.rejected_rows << " row(s) rejected\n";
      loaded.dataset.name = std::filesystem::path(eval_dataset).filename().string();
      ec.standardize = !no_standardize;
      const auto table = evaluate_all_subsets(loaded.dataset, ec, allow_many);
      write_file(eval_output, model_table_to_json(table).dump(2) + "\n");
      std::cerr << "evaluated " << table.entries().size() << " models\n";
    } else if (*serve) {
      const LayoutService service(load_table(serve_input));
      httplib::Server server;
      std::optional<std::filesystem::path> dir;
      if (!static_dir.empty()) dir = static_dir;
      service.bind(server, dir);
      g_server = &server;
      std::signal(SIGINT, [](int) {
        g_stop = 1;
        if (g_server) g_server->stop();
      });
      std::cerr << "listening on http://" << serve_host << ':' << serve_port << '\n';
      if (!server.listen(serve_host, serve_port)) {
        if (g_stop) return 0;
        throw IoError("cannot listen on " + serve_host + ":" + std::to_string(serve_port));
      }
    } else if (*synth) {
      if (synth_names.size() != synth_separations.size()) {
        throw ConfigError("--features and --separations must have the same length");
      }
      write_file(synth_output, to_csv(make_synthetic_dataset(synth_names, synth_separations, synth_rows, synth_seed)));
    } else if (*importance) {
      const auto table = load_table(importance_input);
      std::cout << importance_to_json(feature_importance_summary(table)).dump(2) << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
