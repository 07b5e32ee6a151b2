#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "radialnet/io.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = RADIALNET_CLI;
const std::string kSource = RADIALNET_SOURCE_DIR;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("radialnet_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the binary with stdout/stderr captured into files; returns the exit status.
  int run(const std::string& args) {
    const auto cmd = kCli + " " + args + " >" + path("stdout.txt") + " 2>" + path("stderr.txt");
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string out() const { return radialnet::testing::read_text(path("stdout.txt")); }
  std::string err() const { return radialnet::testing::read_text(path("stderr.txt")); }

  fs::path dir_;
};

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

std::string data(const std::string& name) { return kSource + "/data/" + name; }

}  // namespace

TEST_F(Cli, RenderDemoTable) {
  ASSERT_EQ(run("render " + data("demo6_table.json") + " -o " + path("a.svg")), 0) << err();
  const auto svg = radialnet::testing::read_text(path("a.svg"));
  EXPECT_EQ(count(svg, "<path class=\"arc\""), 6U);
  EXPECT_EQ(count(svg, "<line class=\"model-line\""), 57U);
}

TEST_F(Cli, RenderIsDeterministic) {
  ASSERT_EQ(run("render " + data("demo7_table.json") + " -o " + path("a.svg") + " --spanning 300"), 0);
  ASSERT_EQ(run("render " + data("demo7_table.json") + " -o " + path("b.svg") + " --spanning 300"), 0);
  const auto a = radialnet::testing::read_text(path("a.svg"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, radialnet::testing::read_text(path("b.svg")));
}

TEST_F(Cli, RenderOptions) {
  ASSERT_EQ(run("render " + data("four_feature_table.json") + " -o " + path("a.svg") +
                " --no-points --no-legend --precision 2 --domain 0 1 --width-range 2 8 --mode paper"),
            0)
      << err();
  const auto svg = radialnet::testing::read_text(path("a.svg"));
  EXPECT_EQ(count(svg, "<circle"), 0U);
  EXPECT_EQ(count(svg, "<linearGradient"), 0U);
  EXPECT_NE(svg.find("width=\"696.00\""), std::string::npos);
}

TEST_F(Cli, UsageErrorsExitWith2) {
  EXPECT_EQ(run("render " + data("demo6_table.json") + " -o " + path("a.svg") + " --spanning 0"), 2);
  EXPECT_EQ(run("render " + data("demo6_table.json") + " -o " + path("a.svg") + " --spanning 361"), 2);
  EXPECT_EQ(run("render " + data("demo6_table.json") + " -o " + path("a.svg") + " --mode spiral"), 2);
  EXPECT_EQ(run("render " + data("demo6_table.json") + " -o " + path("a.svg") + " --domain 1 1"), 2);
  EXPECT_EQ(run("eval --dataset " + data("demo6.csv") + " --label label -o " + path("t.json") + " --folds 1"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_FALSE(fs::exists(path("a.svg")));
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, InvalidInputExitsWith1) {
  std::ofstream(path("bad.json")) << "{\"features\": [\"a\"], \"models\": [";
  EXPECT_EQ(run("render " + path("bad.json") + " -o " + path("a.svg")), 1);
  EXPECT_NE(err().find("error:"), std::string::npos);
  EXPECT_EQ(run("layout " + path("missing.json")), 1);
}

TEST_F(Cli, IncompleteTableWarns) {
  std::ofstream(path("t.json")) << R"({"features":["a","b","c"],"models":[
    {"features":["a"],"performance":0.6},{"features":["b"],"performance":0.5},
    {"features":["c"],"performance":0.4},{"features":["a","c"],"performance":0.7}]})";
  ASSERT_EQ(run("layout " + path("t.json")), 0);
  EXPECT_NE(err().find("warning:"), std::string::npos);
  EXPECT_TRUE(radialnet::validate_layout_json(json::parse(out())).empty());
}

TEST_F(Cli, LayoutToStdout) {
  ASSERT_EQ(run("layout " + data("four_feature_table.json") + " --spanning 180"), 0) << err();
  auto doc = json::parse(out());
  EXPECT_TRUE(radialnet::validate_layout_json(doc).empty());
  EXPECT_EQ(doc["order"], json({"F1", "F2", "F3", "F4"}));
  EXPECT_EQ(doc["lines"].size(), 11U);
}

TEST_F(Cli, EvalDemoDataset) {
  ASSERT_EQ(run("eval --dataset " + data("demo6.csv") + " --label label -o " + path("t.json")), 0) << err();
  EXPECT_NE(err().find("evaluated 63 models"), std::string::npos);
  const auto first = radialnet::testing::read_text(path("t.json"));
  auto doc = json::parse(first);
  EXPECT_EQ(doc["models"].size(), 63U);
  EXPECT_EQ(doc["meta"]["dataset"], "demo6.csv");

  ASSERT_EQ(run("eval --dataset " + data("demo6.csv") + " --label label -o " + path("u.json") + " --threads 1"), 0);
  EXPECT_EQ(first, radialnet::testing::read_text(path("u.json")));
}

TEST_F(Cli, EvalFeatureGuard) {
  EXPECT_EQ(run("eval --dataset " + data("demo7.csv") + " --label label -o " + path("t.json") + " --max-features 6"), 2);
  EXPECT_EQ(run("eval --dataset " + data("demo7.csv") + " --label label -o " + path("t.json") +
                " --max-features 6 --allow-many-features"),
            0);
}

TEST_F(Cli, SynthThenEval) {
  ASSERT_EQ(run("synth --features p,q --separations 4,0 --rows 60 --seed 3 -o " + path("d.csv")), 0) << err();
  ASSERT_EQ(run("eval --dataset " + path("d.csv") + " --label label -o " + path("t.json")), 0) << err();
  auto table = radialnet::parse_model_table(radialnet::testing::read_text(path("t.json"))).table;
  EXPECT_EQ(table.entries().size(), 3U);
  EXPECT_EQ(run("synth --features p,q --separations 4 -o " + path("e.csv")), 2);
}

TEST_F(Cli, Importance) {
  ASSERT_EQ(run("importance " + data("four_feature_table.json")), 0);
  auto doc = json::parse(out());
  EXPECT_EQ(doc["importance"][0]["feature"], "F1");
}
