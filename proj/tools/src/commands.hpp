#pragma once

#include <optional>
#include <string>

#include "mtlf/mtlf.hpp"

namespace mtlf::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kDataError = 3,
  kNumericalError = 4,
};

/// Values given on the command line; each one overrides the config file.
struct BacktestOverrides {
  std::optional<std::string> data;
  std::optional<std::string> holidays;
  std::optional<bool> celsius;
  std::optional<std::string> output_dir;
  std::optional<std::string> total_mode;
  std::optional<int> warmup_days;
  std::optional<int> prediction_hour;
  std::optional<int> horizon;
  std::optional<double> lambda_s;
  std::optional<double> lambda_r;
  std::optional<std::string> calendar_scheme;
  std::optional<std::string> temp_mean;
  std::optional<bool> no_baseline;
  std::optional<std::uint64_t> seed;
};

struct BacktestOptions {
  std::string config;
  BacktestOverrides overrides;
  std::string snapshot_at;
  std::string snapshot_out;
  bool quiet = false;
};

struct SimulateOptions {
  std::string spec;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> hours;
};

struct ForecastOptions {
  std::string snapshot;
  std::string data;
  std::string holidays;
  bool celsius = false;
  std::string at;
  int horizon = 24;
  std::string out;
  bool csv = false;
};

struct SnapshotSaveOptions {
  std::string config;
  BacktestOverrides overrides;
  std::string until;
  std::string out;
};

struct MetricsOptions {
  std::string log;
  std::string output_dir;
  std::string total_mode = "pooled";
};

int run_backtest_command(const BacktestOptions& options);
int run_simulate_command(const SimulateOptions& options);
int run_forecast_command(const ForecastOptions& options);
int run_snapshot_save_command(const SnapshotSaveOptions& options);
int run_snapshot_show_command(const std::string& path);
int run_metrics_command(const MetricsOptions& options);

}  // namespace mtlf::cli
