#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mtlf/mtlf.hpp"
#include "scenarios.hpp"

namespace fs = std::filesystem;

namespace {

struct CommandResult {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mtlf_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    auto spec = mtlf::testing::correlated_spec(40);
    std::ofstream(dir_ / "spec.json") << mtlf::dump_synthetic_spec(spec);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CommandResult run(const std::string& args) const {
    const auto out = dir_ / "stdout.txt";
    const auto err = dir_ / "stderr.txt";
    const std::string cmd = std::string(MTLF_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    return CommandResult{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

  fs::path dir_;
};

std::vector<std::string> lines_issued_at(const std::string& jsonl, const std::string& issued) {
  std::vector<std::string> out;
  std::istringstream in(jsonl);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find("\"issued_at\":\"" + issued + "\"") != std::string::npos) out.push_back(line);
  }
  return out;
}

}  // namespace

TEST_F(CliTest, SimulateThenBacktest) {
  const auto csv = (dir_ / "d.csv").string();
  auto r = run("simulate --spec " + (dir_ / "spec.json").string() + " --out " + csv);
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string before = slurp(csv);
  r = run("backtest --data " + csv + " --out " + (dir_ / "out").string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("TOTAL MAPE"), std::string::npos);
  for (const char* name : {"metrics.csv", "metrics.json", "forecasts.jsonl", "resolved_config.json",
                           "cdf_engine.csv", "cdf_persistence.csv"}) {
    EXPECT_TRUE(fs::exists(dir_ / "out" / name)) << name;
  }
  EXPECT_EQ(slurp(csv), before);
  const auto resolved = mtlf::load_run_config(dir_ / "out" / "resolved_config.json");
  EXPECT_EQ(resolved.backtest, mtlf::BacktestConfig{});
  EXPECT_EQ(resolved.data, csv);
}

TEST_F(CliTest, SimulateIsDeterministic) {
  ASSERT_EQ(run("simulate -s " + (dir_ / "spec.json").string() + " -o " + (dir_ / "a.csv").string()).code, 0);
  ASSERT_EQ(run("simulate -s " + (dir_ / "spec.json").string() + " -o " + (dir_ / "b.csv").string()).code, 0);
  EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "a.resolved.json"));
}

TEST_F(CliTest, OutOfRangeLambdaIsConfigError) {
  const auto csv = (dir_ / "d.csv").string();
  ASSERT_EQ(run("simulate -s " + (dir_ / "spec.json").string() + " -o " + csv).code, 0);
  const auto r = run("backtest --data " + csv + " --lambda-s 1.3 --out " + (dir_ / "out").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("(0, 1]"), std::string::npos) << r.err;
  std::ofstream(dir_ / "bad.json") << R"({"backtest": {"lambda_s": 1.3}})";
  EXPECT_EQ(run("backtest -c " + (dir_ / "bad.json").string() + " --data " + csv).code, 2);
  EXPECT_EQ(run("backtest --bogus-flag").code, 2);
}

TEST_F(CliTest, DataProblemsExitWithThree) {
  EXPECT_EQ(run("backtest --data " + (dir_ / "missing.csv").string()).code, 3);
  ASSERT_EQ(run("simulate -s " + (dir_ / "spec.json").string() + " -o " + (dir_ / "short.csv").string() +
                " --hours 200").code,
            0);
  const auto r = run("backtest --data " + (dir_ / "short.csv").string() + " --out " + (dir_ / "o").string());
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("no forecasts"), std::string::npos) << r.err;
}

TEST_F(CliTest, ForecastFromSnapshotMatchesInRunEmission) {
  const auto csv = (dir_ / "d.csv").string();
  ASSERT_EQ(run("simulate -s " + (dir_ / "spec.json").string() + " -o " + csv).code, 0);
  const std::string at = "2017-02-05T11:00:00Z";
  auto r = run("backtest --data " + csv + " --out " + (dir_ / "out").string() + " --snapshot-at " + at);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto expected = lines_issued_at(slurp(dir_ / "out" / "forecasts.jsonl"), at);
  ASSERT_EQ(expected.size(), 24u * 3u);

  r = run("forecast --snapshot " + (dir_ / "out" / "snapshot.bin").string() + " --data " + csv);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines_issued_at(r.out, at), expected);

  r = run("snapshot save --data " + csv + " --until " + at + " -o " + (dir_ / "s.bin").string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir_ / "s.bin"), slurp(dir_ / "out" / "snapshot.bin"));
  r = run("forecast --snapshot " + (dir_ / "s.bin").string() + " --data " + csv + " --at " + at);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines_issued_at(r.out, at), expected);

  r = run("forecast --snapshot " + (dir_ / "s.bin").string() + " --data " + csv +
          " --at 2017-02-06T11:00:00Z");
  EXPECT_EQ(r.code, 3);

  r = run("snapshot show " + (dir_ / "s.bin").string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"last_timestamp\": \"" + at + "\""), std::string::npos) << r.out;
}

TEST_F(CliTest, MetricsFromLogMatchBacktest) {
  const auto csv = (dir_ / "d.csv").string();
  ASSERT_EQ(run("simulate -s " + (dir_ / "spec.json").string() + " -o " + csv).code, 0);
  ASSERT_EQ(run("backtest --no-baseline --total-mode both --data " + csv + " --out " + (dir_ / "out").string()).code, 0);
  const auto r = run("metrics --total-mode both --log " + (dir_ / "out" / "forecasts.jsonl").string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, slurp(dir_ / "out" / "metrics.csv"));
}

TEST_F(CliTest, RefusesToOverwriteInputs) {
  const auto csv = (dir_ / "d.csv").string();
  ASSERT_EQ(run("simulate -s " + (dir_ / "spec.json").string() + " -o " + csv).code, 0);
  const auto before = slurp(csv);
  const auto r = run("simulate -s " + (dir_ / "spec.json").string() + " -o " + (dir_ / "spec.json").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(run("metrics --log " + csv + " -o " + dir_.string()).code, 3);
  EXPECT_EQ(slurp(csv), before);
}
