#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace mtlf::cli;

namespace {

void add_run_options(CLI::App* cmd, std::string& config, BacktestOverrides& o) {
  cmd->add_option("-c,--config", config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--data", o.data, "load/temperature CSV (overrides config)");
  cmd->add_option("--holidays", o.holidays, "holiday date list");
  cmd->add_flag("--celsius", o.celsius, "temperature column is in degrees Celsius");
  cmd->add_option("--warmup-days", o.warmup_days);
  cmd->add_option("--prediction-hour", o.prediction_hour);
  cmd->add_option("--horizon", o.horizon);
  cmd->add_option("--lambda-s", o.lambda_s, "forgetting factor of the load-transition model");
  cmd->add_option("--lambda-r", o.lambda_r, "forgetting factor of the observation model");
  cmd->add_option("--calendar-scheme", o.calendar_scheme, "hour-daytype | hour | daytype | constant");
  cmd->add_option("--temp-mean", o.temp_mean, "cumulative | exponential");
  cmd->add_option("--seed", o.seed, "seed for a synthetic data section");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online multi-entity probabilistic load forecasting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mtlf 0.1.0");

  BacktestOptions bt;
  auto* backtest = app.add_subcommand("backtest", "replay data hour by hour and score daily forecasts");
  add_run_options(backtest, bt.config, bt.overrides);
  backtest->add_option("-o,--out", bt.overrides.output_dir, "output directory");
  backtest->add_option("--total-mode", bt.overrides.total_mode, "pooled | mean | both");
  backtest->add_flag("--no-baseline", bt.overrides.no_baseline, "skip the persistence baseline");
  backtest->add_option("--snapshot-at", bt.snapshot_at, "save the learner state after this hour");
  backtest->add_option("--snapshot-out", bt.snapshot_out, "snapshot path (default <out>/snapshot.bin)");
  backtest->add_flag("-q,--quiet", bt.quiet);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "generate a synthetic panel");
  simulate->add_option("-s,--spec", sim.spec, "synthetic spec (JSON)")->required()->check(CLI::ExistingFile);
  simulate->add_option("-o,--out", sim.out, "output CSV")->required();
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--hours", sim.hours);

  ForecastOptions fc;
  auto* forecast = app.add_subcommand("forecast", "issue one forecast from a snapshot");
  forecast->add_option("--snapshot", fc.snapshot)->required()->check(CLI::ExistingFile);
  forecast->add_option("--data", fc.data, "CSV supplying temperatures for the horizon")->required();
  forecast->add_option("--holidays", fc.holidays);
  forecast->add_flag("--celsius", fc.celsius);
  forecast->add_option("--at", fc.at, "issue time (defaults to the snapshot's last hour)");
  forecast->add_option("--horizon", fc.horizon);
  forecast->add_option("-o,--out", fc.out, "output file (default stdout)");
  forecast->add_flag("--csv", fc.csv, "compact CSV instead of JSON lines");

  auto* snapshot = app.add_subcommand("snapshot", "save or inspect learner snapshots");
  snapshot->require_subcommand(1);
  SnapshotSaveOptions save;
  auto* snap_save = snapshot->add_subcommand("save", "learn data and save the state");
  add_run_options(snap_save, save.config, save.overrides);
  snap_save->add_option("--until", save.until, "last hour to learn (default: all)");
  snap_save->add_option("-o,--out", save.out)->required();
  std::string show_path;
  auto* snap_show = snapshot->add_subcommand("show", "print a snapshot summary");
  snap_show->add_option("path", show_path)->required()->check(CLI::ExistingFile);

  MetricsOptions mx;
  auto* metrics = app.add_subcommand("metrics", "recompute accuracy reports from a forecast log");
  metrics->add_option("--log", mx.log, "forecasts.jsonl")->required()->check(CLI::ExistingFile);
  metrics->add_option("-o,--out", mx.output_dir, "output directory (default: CSV to stdout)");
  metrics->add_option("--total-mode", mx.total_mode);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*backtest) return run_backtest_command(bt);
    if (*simulate) return run_simulate_command(sim);
    if (*forecast) return run_forecast_command(fc);
    if (*snap_save) return run_snapshot_save_command(save);
    if (*snap_show) return run_snapshot_show_command(show_path);
    if (*metrics) return run_metrics_command(mx);
  } catch (const mtlf::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const mtlf::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const mtlf::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
