#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using qubus::cli::run_cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Reports with the output paths dropped from the manifest.
nlohmann::json without_outputs(const std::string& path) {
  auto j = nlohmann::json::parse(slurp(path));
  j["manifest"].erase("outputs");
  return j;
}

std::string golden(const char* name) { return slurp(fs::path(QUBUS_TEST_DATA) / name); }

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qubus_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const char* name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

const std::vector<std::string> kSmallChain{"--total-span", "3.2", "--segment-span", "0.8",
                                           "--qubits-per-half-station", "8", "--base-fidelity",
                                           "0.95", "--target-pairs", "20"};

std::vector<std::string> simulate_args(std::vector<std::string> extra) {
  std::vector<std::string> a{"simulate"};
  a.insert(a.end(), kSmallChain.begin(), kSmallChain.end());
  a.insert(a.end(), extra.begin(), extra.end());
  return a;
}

}  // namespace

TEST(Cli, Table1Golden) {
  const auto r = cli({"table1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("table1.txt"));
}

TEST(Cli, LinkCurveGolden) {
  const auto r = cli({"link-curve"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("link_curve_r08.csv"));
}

TEST(Cli, TuneGolden) {
  const auto r = cli({"tune"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("tune.txt"));
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"link-curve", "--ratio", "0"}).code, 2);
  EXPECT_EQ(cli({"link-curve", "--ratio", "abc"}).code, 2);
  EXPECT_EQ(cli({"simulate", "--segment-span", "0.7"}).code, 2);
  EXPECT_EQ(cli({"simulate", "--no-such-key", "1"}).code, 2);
  EXPECT_EQ(cli({"simulate", "--config", "/nonexistent.yaml"}).code, 2);
  EXPECT_EQ(cli({"simulate", "--seeds", "1,x"}).code, 2);
  EXPECT_EQ(cli({"tune", "--candidate", "bad"}).code, 2);
}

TEST(Cli, HelpExitsZero) {
  EXPECT_EQ(cli({"--help"}).code, 0);
  EXPECT_EQ(cli({"simulate", "--help"}).code, 0);
}

TEST(Cli, UnreachableTuneExitsOne) {
  const auto r = cli({"tune", "--candidate", "low:0.51:single_round"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("winner: none"), std::string::npos);
}

TEST_F(CliFiles, SimulateWritesReportAndIsRepeatable) {
  auto args = simulate_args({"--seeds", "3,1,2", "--repeat", "2", "--out", path("a.json")});
  ASSERT_EQ(cli(args).code, 0);
  const auto j = nlohmann::json::parse(slurp(path("a.json")));
  EXPECT_EQ(j["manifest"]["schema"], "qubus.simulate/1");
  EXPECT_EQ(j["reports"].size(), 3u);
  EXPECT_EQ(j["reports"][0]["seed"], 3);
  EXPECT_EQ(j["aggregate"]["trials"], 3);

  args = simulate_args({"--seeds", "3,1,2", "--parallel", "3", "--out", path("b.json")});
  ASSERT_EQ(cli(args).code, 0);
  EXPECT_EQ(without_outputs(path("a.json")), without_outputs(path("b.json")));
}

TEST_F(CliFiles, SimulateFromManifestReproduces) {
  ASSERT_EQ(cli(simulate_args({"--seeds", "4,5", "--out", path("a.json")})).code, 0);
  ASSERT_EQ(cli({"simulate", "--from-manifest", path("a.json"), "--out", path("b.json")}).code, 0);
  EXPECT_EQ(without_outputs(path("a.json")), without_outputs(path("b.json")));
}

TEST_F(CliFiles, ConfigFileAndOverride) {
  std::ofstream(path("c.yaml")) << "total_span: 3.2\nsegment_span: 0.8\nqubits_per_half_station: 8\n"
                                   "base_fidelity: 0.95\ntarget_pairs: 20\n";
  ASSERT_EQ(cli({"simulate", "--config", path("c.yaml"), "--seed", "9", "--out", path("a.json")}).code,
            0);
  const auto j = nlohmann::json::parse(slurp(path("a.json")));
  EXPECT_EQ(j["manifest"]["parameters"]["qubits_per_half_station"], 8);
  EXPECT_EQ(j["reports"][0]["seed"], 9);
}

TEST_F(CliFiles, TextOutputsGetManifest) {
  ASSERT_EQ(cli({"link-curve", "--ratio", "1.6", "--out", path("c.csv")}).code, 0);
  const auto m = nlohmann::json::parse(slurp(path("c.csv") + ".manifest.json"));
  EXPECT_EQ(m["subcommand"], "link-curve");
  ASSERT_EQ(cli({"link-curve", "--from-manifest", path("c.csv.manifest.json"), "--out", path("d.csv")})
                .code,
            0);
  EXPECT_EQ(slurp(path("c.csv")), slurp(path("d.csv")));
}

TEST_F(CliFiles, TraceIsWrittenPerSeed) {
  ASSERT_EQ(cli(simulate_args({"--seeds", "1,2", "--trace", path("t.csv"), "--out", path("a.json")}))
                .code,
            0);
  int traces = 0;
  for (const auto& e : fs::directory_iterator(dir_)) {
    traces += e.path().filename().string().rfind("t", 0) == 0;
  }
  EXPECT_EQ(traces, 2);
}
