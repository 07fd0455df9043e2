#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "srv/experiments.hpp"
#include "srv/io.hpp"
#include "srv_cli/cli.hpp"

namespace srv {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_dir() {
  const auto dir = fs::temp_directory_path() / ("srv_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                                "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::vector<Direction> directions_of(const nlohmann::json& report) {
  std::vector<Direction> out;
  for (const auto& d : report["directions"]) {
    out.push_back(Direction::from_one_based(d["indices"].get<std::vector<int>>()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Cli, ProjectTwoDimPoint) {
  const auto r = run({"project", "--z", "1", "--vector", "1.5,1.0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["w"], (std::vector<double>{0.75, 0.25}));
  EXPECT_EQ(j["lambda"], 0.75);
  EXPECT_EQ(j["rho"], 2);
  const auto m = run({"project", "--vector", "1.5 1.0", "--algorithm", "median", "--seed", "4"});
  ASSERT_EQ(m.code, 0);
  EXPECT_EQ(nlohmann::json::parse(m.out)["seed"], 4);
}

TEST(Cli, DetectTwoAxisRows) {
  const auto dir = temp_dir();
  write_file(dir / "x.csv", "10,0\n0,10\n");
  const auto r = run({"detect", "--input", (dir / "x.csv").string(), "--k", "100", "--p", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(directions_of(j), (std::vector<Direction>{Direction{0}, Direction{1}}));
  EXPECT_EQ(j["directions"][0]["t_beta"], 0.5);
  EXPECT_NE(r.err.find("k=100"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"project", "--vector", "1", "--bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"project"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"project", "--vector", "0,0"}).code, cli::kExitData);
  EXPECT_EQ(run({"experiment", "--table", "9"}).code, cli::kExitData);

  const auto dir = temp_dir();
  write_file(dir / "bad.csv", "a,b\n1,2\n3,oops\n");
  const auto bad = run({"detect", "--input", (dir / "bad.csv").string()});
  EXPECT_EQ(bad.code, cli::kExitData);
  EXPECT_NE(bad.err.find("line 3, column 2"), std::string::npos) << bad.err;
  write_file(dir / "ragged.csv", "1,2\n3\n");
  EXPECT_EQ(run({"damex", "--input", (dir / "ragged.csv").string()}).code, cli::kExitData);
  fs::remove_all(dir);
}

TEST(Cli, HelpListsEveryFlag) {
  const auto top = run({"--help"});
  EXPECT_EQ(top.code, 0);
  for (const char* sub : {"project", "detect", "damex", "simulate", "oracle", "experiment", "--threads"}) {
    EXPECT_NE(top.out.find(sub), std::string::npos) << sub;
  }
  const auto det = run({"detect", "--help"});
  for (const char* flag : {"--input", "--output", "--k", "--p", "--rank-transform"}) {
    EXPECT_NE(det.out.find(flag), std::string::npos) << flag;
  }
  const auto dam = run({"damex", "--help"});
  EXPECT_NE(dam.out.find("--epsilon"), std::string::npos);
  const auto sim = run({"simulate", "--help"});
  for (const char* flag : {"--model", "--n", "--d", "--seed", "--q", "--output", "--header"}) {
    EXPECT_NE(sim.out.find(flag), std::string::npos) << flag;
  }
  const auto exp = run({"experiment", "--help"});
  for (const char* flag : {"--table", "--scale", "--seed", "--out-dir", "--full"}) {
    EXPECT_NE(exp.out.find(flag), std::string::npos) << flag;
  }
}

TEST(Cli, SimulateThenDetectReproducesHarness) {
  const auto dir = temp_dir();
  ExperimentConfig cfg = default_config(3, Scale::Desk, 12);
  cfg.sizes = {5000};
  cfg.alphas = {1.0};
  const auto harness = run_replication(cfg, 5000, 0, 0);
  const auto seed = std::to_string(data_seed(12, 3, 5000, 0, 0));
  const auto csv = (dir / "dep.csv").string();
  const auto sim = run({"simulate", "--model", "dependent", "--n", "5000", "--seed", seed,
                        "--output", csv, "--header"});
  ASSERT_EQ(sim.code, 0) << sim.err;
  ASSERT_TRUE(fs::exists(csv + ".truth.json"));
  const auto det = run({"detect", "--input", csv});
  ASSERT_EQ(det.code, 0) << det.err;
  auto expected = harness.front().detected;
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(directions_of(nlohmann::json::parse(det.out)), expected);

  // Asymptotic independence with its separate covariance seed, DAMEX column.
  ExperimentConfig ai = default_config(1, Scale::Desk, 12);
  ai.alphas = {};
  ai.epsilons = {0.5};
  const auto ai_harness = run_replication(ai, 3000, 1, 2);
  const auto ai_csv = (dir / "ai.csv").string();
  ASSERT_EQ(run({"simulate", "--model", "asympt-indep", "--n", "3000", "--seed",
                 std::to_string(data_seed(12, 1, 3000, 1, 2)), "--sigma-seed",
                 std::to_string(covariance_seed(12, 1, 1)), "--output", ai_csv})
                .code,
            0);
  const auto dm = run({"damex", "--input", ai_csv, "--epsilon", "0.5"});
  ASSERT_EQ(dm.code, 0) << dm.err;
  auto ai_expected = ai_harness.front().detected;
  std::sort(ai_expected.begin(), ai_expected.end());
  EXPECT_EQ(directions_of(nlohmann::json::parse(dm.out)), ai_expected);
  fs::remove_all(dir);
}

TEST(Cli, OracleAndExperiment) {
  const auto o = run({"oracle", "--model", "proportional", "--beta", "1,2", "--n", "1000"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_NEAR(j["estimate"].get<double>(), 4.0 / 17, 1e-12);
  EXPECT_NEAR(j["closed_form"].get<double>(), 4.0 / 17, 1e-12);
  EXPECT_EQ(run({"oracle", "--quantity", "c-beta"}).code, cli::kExitData);
  const auto law = run({"oracle", "--quantity", "z-law", "--n", "20000"});
  ASSERT_EQ(law.code, 0);
  EXPECT_EQ(nlohmann::json::parse(law.out)["maximal"].size(), 1u);

  const auto dir = temp_dir();
  const auto e = run({"--threads", "1", "experiment", "--table", "4", "--seed", "3", "--sizes",
                      "3000", "--replications", "2", "--out-dir", dir.string()});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_TRUE(fs::exists(dir / "table4_results.csv"));
  std::ifstream summary(dir / "summary.json");
  EXPECT_EQ(nlohmann::json::parse(summary)["seed"], 3);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace srv
