#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("anosov_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const fs::path& dir, const std::string& command, const std::string& config, const std::string& extra = "") {
  std::ofstream(dir / "run.cfg") << config;
  const std::string cmd = std::string(ANOSOV_CLI) + " " + command + " --config " + (dir / "run.cfg").string() +
                          " --out " + (dir / "out").string() + " " + extra + " 2>" + (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const char* kManeConfig =
    "base_matrix = 0,1,0; 0,0,1; 1,-6,5\n"
    "variant = mane\n"
    "radius = 0.05\n"
    "strength = 0.6\n";

}  // namespace

TEST(Cli, PeriodicCountsMatchDeterminantOracle) {
  const auto dir = scratch("periodic");
  ASSERT_EQ(run(dir, "periodic", "base_matrix = 2,1;1,1\nn_max = 10\n"), 0);
  const auto rows = csv_rows(dir / "out" / "periodic_counts.csv");
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows[0][0], "n");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i][1], rows[i][2]);
    EXPECT_EQ(rows[i][1], rows[i][3]);
  }
  EXPECT_EQ(rows[10][1], "15125");
  const json man = json::parse(slurp(dir / "out" / "manifest.json"));
  EXPECT_EQ(man["command"], "periodic");
  const std::string head = slurp(dir / "out" / "periodic_counts.csv").substr(0, 30);
  EXPECT_EQ(head, "# config_hash=" + man["config_hash"].get<std::string>());
}

TEST(Cli, LinearSemiconjugacyIsIdentity) {
  const auto dir = scratch("semiconj_linear");
  ASSERT_EQ(run(dir, "semiconj", "base_matrix = 0,1,0; 0,0,1; 1,-6,5\ngrid_side = 5\n"), 0);
  const auto rows = csv_rows(dir / "out" / "semiconj.csv");
  ASSERT_EQ(rows.size(), 126u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(std::stod(rows[i][4]), 1e-12);
    EXPECT_LT(std::stod(rows[i][5]), 1e-12);
  }
}

TEST(Cli, VerifyHypothesesOnManeMap) {
  const auto dir = scratch("verify");
  ASSERT_EQ(run(dir, "verify-h", std::string(kManeConfig) + "n_max = 4\nh3_n_max = 5\nsamples = 5000\n"), 0);
  const json r = json::parse(slurp(dir / "out" / "verify-h.json"));
  EXPECT_TRUE(r["h1"]["within_envelope"].get<bool>());
  EXPECT_TRUE(r["h2"]["ok"].get<bool>());
  EXPECT_TRUE(r["h3"]["nondecreasing"].get<bool>());
  for (const char* k : {"item1_ok", "item2_ok", "item3_ok", "item4_ok"}) EXPECT_TRUE(r["setup"][k].get<bool>()) << k;
}

TEST(Cli, ConfigErrorExitsWithTwo) {
  const auto dir = scratch("config_error");
  EXPECT_EQ(run(dir, "semiconj", "radius = 0.9\n"), 2);
  const json err = json::parse(slurp(dir / "out" / "error.json"));
  EXPECT_EQ(err["error"], "ConfigError");
  EXPECT_EQ(err["exit_code"], 2);
}

TEST(Cli, UnknownCommandExitsWithTwo) {
  const auto dir = scratch("unknown");
  EXPECT_EQ(run(dir, "frobnicate", ""), 2);
}

TEST(Cli, BudgetExceededExitsWithFour) {
  const auto dir = scratch("budget");
  EXPECT_EQ(run(dir, "entropy", "samples = 1000\nbudget = 1000\n"), 4);
  const json err = json::parse(slurp(dir / "out" / "error.json"));
  EXPECT_EQ(err["error"], "BudgetExceeded");
}

TEST(Cli, UnusedKeysAreReported) {
  const auto dir = scratch("unused");
  ASSERT_EQ(run(dir, "spectrum", "base_matrix = 2,1;1,1\nspelling_mistake = 1\n"), 0);
  const json man = json::parse(slurp(dir / "out" / "manifest.json"));
  EXPECT_EQ(man["unused_keys"], json::array({"spelling_mistake"}));
  EXPECT_NE(slurp(dir / "stderr.txt").find("spelling_mistake"), std::string::npos);
}

TEST(Cli, OutputsIndependentOfThreadCount) {
  const std::string cfg = std::string(kManeConfig) + "grid_side = 8\nsamples = 3000\nn_max = 5\neps = 0.25, 0.3, 0.35\n";
  for (const std::string cmd : {"semiconj", "entropy", "measure"}) {
    const auto a = scratch(cmd + "_t1"), b = scratch(cmd + "_t4");
    ASSERT_EQ(run(a, cmd, cfg, "--threads 1"), 0) << cmd;
    ASSERT_EQ(run(b, cmd, cfg, "--threads 4"), 0) << cmd;
    const json man = json::parse(slurp(a / "out" / "manifest.json"));
    for (const auto& f : man["outputs"]) {
      const std::string name = f.get<std::string>();
      if (name.size() > 4 && name.substr(name.size() - 4) == ".csv")
        EXPECT_EQ(slurp(a / "out" / name), slurp(b / "out" / name)) << cmd << " " << name;
    }
  }
}
