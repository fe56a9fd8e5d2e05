#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace mtlf::cli {
namespace {

Timestamp flag_time(const std::string& text, const char* flag) {
  try {
    return parse_timestamp(text);
  } catch (const DataError& e) {
    throw ConfigError(std::string(flag) + ": " + e.what());
  }
}

std::string read_text(const fs::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ConfigError(std::string("cannot open ") + what + " " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig resolve(const std::string& config_path, const BacktestOverrides& o) {
  RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
  if (o.data) cfg.data = *o.data;
  if (o.holidays) cfg.holidays = *o.holidays;
  if (o.celsius) cfg.celsius = *o.celsius;
  if (o.output_dir) cfg.output_dir = *o.output_dir;
  if (o.total_mode) cfg.total_mode = parse_total_mode(*o.total_mode);
  auto& b = cfg.backtest;
  if (o.warmup_days) b.warmup_days = *o.warmup_days;
  if (o.prediction_hour) b.prediction_hour = *o.prediction_hour;
  if (o.horizon) b.horizon = *o.horizon;
  if (o.lambda_s) b.lambda_s = *o.lambda_s;
  if (o.lambda_r) b.lambda_r = *o.lambda_r;
  if (o.calendar_scheme) b.scheme = CalendarScheme::from_id(*o.calendar_scheme);
  if (o.temp_mean) {
    if (*o.temp_mean == "cumulative") b.temp_mean_mode = TempMeanMode::Cumulative;
    else if (*o.temp_mean == "exponential") b.temp_mean_mode = TempMeanMode::Exponential;
    else throw ConfigError("--temp-mean must be cumulative or exponential");
  }
  if (o.no_baseline && *o.no_baseline) b.run_baseline = false;
  if (o.seed) {
    cfg.seed = *o.seed;
    if (cfg.synthetic) cfg.synthetic->seed = *o.seed;
  }
  if (cfg.data.empty() && !cfg.synthetic) {
    throw ConfigError("no input: pass --data or give a 'synthetic' section in the config");
  }
  cfg.validate();
  return cfg;
}

EntityPanel load_panel(const RunConfig& cfg) {
  if (cfg.data.empty()) return generate(*cfg.synthetic);
  IngestOptions options;
  options.celsius = cfg.celsius;
  options.holidays = cfg.holidays;
  return ingest(fs::path(cfg.data), options);
}

/// Refuses to write over any of the given input files.
void guard_output(const fs::path& out, std::initializer_list<std::string> inputs) {
  if (!fs::exists(out)) return;
  for (const auto& in : inputs) {
    if (!in.empty() && fs::exists(in) && fs::equivalent(out, in)) {
      throw ConfigError("refusing to overwrite input file " + in);
    }
  }
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

HourRecord hour_of(const EntityPanel& p, int t) {
  const auto i = static_cast<std::size_t>(t);
  return HourRecord{p.timestamps[i], p.loads.row(t).transpose(), p.temperatures.row(t).transpose(),
                    p.holidays[i]};
}

int find_hour(const EntityPanel& p, const Timestamp& ts) {
  for (std::size_t i = 0; i < p.timestamps.size(); ++i) {
    if (p.timestamps[i].utc == ts.utc) return static_cast<int>(i);
  }
  return -1;
}

void write_reports(const fs::path& dir, const std::vector<const MetricsReport*>& reports,
                   TotalMode mode, const std::initializer_list<std::string>& inputs) {
  const auto csv_path = dir / "metrics.csv";
  const auto json_path = dir / "metrics.json";
  guard_output(csv_path, inputs);
  guard_output(json_path, inputs);
  {
    auto out = open_output(csv_path);
    write_metrics_csv(reports, mode, out);
  }
  {
    auto out = open_output(json_path);
    out << metrics_json(reports, mode) << '\n';
  }
  for (const auto* r : reports) {
    if (r->absolute_errors.empty()) continue;
    const auto path = dir / ("cdf_" + r->method + ".csv");
    guard_output(path, inputs);
    auto out = open_output(path);
    write_cdf_csv(error_cdf(r->absolute_errors), out);
  }
}

void print_summary(const std::vector<const MetricsReport*>& reports) {
  for (const auto* r : reports) {
    std::cout << r->method << ": " << r->forecasts << " forecasts";
    if (r->total.percentage_count > 0) std::cout << ", TOTAL MAPE " << r->total.mape() << " %";
    if (r->total.count > 0) std::cout << ", TOTAL RMSE " << r->total.rmse();
    if (r->total.zero_excluded > 0) {
      std::cout << " (" << r->total.zero_excluded << " zero loads excluded from MAPE)";
    }
    std::cout << '\n';
  }
}

}  // namespace

int run_backtest_command(const BacktestOptions& options) {
  const RunConfig cfg = resolve(options.config, options.overrides);
  const fs::path dir = cfg.output_dir;
  const std::initializer_list<std::string> inputs{options.config, cfg.data, cfg.holidays};
  fs::create_directories(dir);
  const auto resolved_path = dir / "resolved_config.json";
  guard_output(resolved_path, inputs);
  open_output(resolved_path) << dump_run_config(cfg) << '\n';

  const EntityPanel panel = load_panel(cfg);
  Backtester bt(panel.entity_ids, cfg.backtest);

  const auto log_path = dir / "forecasts.jsonl";
  guard_output(log_path, inputs);
  auto log = open_output(log_path);
  bt.set_forecast_sink([&](const Forecast& f, const RowMatrix& actuals) {
    write_jsonl(to_records(f, panel.entity_ids, &actuals), log);
  });

  std::optional<Timestamp> snapshot_at;
  bool snapshot_written = false;
  fs::path snapshot_path;
  if (!options.snapshot_at.empty()) {
    snapshot_at = flag_time(options.snapshot_at, "--snapshot-at");
    snapshot_path = options.snapshot_out.empty() ? dir / "snapshot.bin" : fs::path(options.snapshot_out);
    guard_output(snapshot_path, inputs);
    bt.set_hour_hook([&](const Backtester& b) {
      const auto& last = b.state().last_timestamp;
      if (last && last->utc == snapshot_at->utc) {
        save_snapshot(Snapshot{panel.entity_ids, b.state()}, snapshot_path);
        snapshot_written = true;
      }
    });
  }

  for (int t = 0; t < panel.num_hours(); ++t) bt.push(hour_of(panel, t));
  bt.finish();
  log.close();

  if (snapshot_at && !snapshot_written) {
    throw DataError("--snapshot-at " + format_timestamp(*snapshot_at) + " is not an hour of the data");
  }
  if (bt.report().empty()) {
    throw DataError("no forecasts emitted: the data covers " + std::to_string(panel.num_hours()) +
                    " hours, fewer than the " + std::to_string(cfg.backtest.warmup_days) +
                    "-day warm-up plus the horizon");
  }
  std::vector<const MetricsReport*> reports{&bt.report()};
  if (cfg.backtest.run_baseline && !bt.baseline_report().empty()) {
    reports.push_back(&bt.baseline_report());
  }
  write_reports(dir, reports, cfg.total_mode, inputs);
  if (!options.quiet) {
    print_summary(reports);
    if (bt.skipped_untrained() > 0) {
      std::cout << bt.skipped_untrained() << " emission(s) skipped: untrained calendar type\n";
    }
    if (snapshot_written) std::cout << "snapshot written to " << snapshot_path.string() << '\n';
    std::cout << "outputs in " << dir.string() << '\n';
  }
  return kOk;
}

int run_simulate_command(const SimulateOptions& options) {
  const std::string text = read_text(options.spec, "spec");
  SyntheticSpec spec;
  nlohmann::json probe;
  try {
    probe = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed JSON spec: ") + e.what());
  }
  if (probe.is_object() && probe.contains("synthetic")) {
    const auto cfg = parse_run_config(text);
    spec = *cfg.synthetic;
  } else {
    spec = parse_synthetic_spec(text);
  }
  if (options.seed) spec.seed = *options.seed;
  if (options.hours) spec.hours = *options.hours;
  spec.validate();

  const fs::path out = options.out;
  guard_output(out, {options.spec});
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  const EntityPanel panel = generate(spec);
  write_panel_csv(panel, out);
  fs::path resolved = out;
  resolved.replace_extension(".resolved.json");
  guard_output(resolved, {options.spec});
  open_output(resolved) << dump_synthetic_spec(spec) << '\n';
  std::cout << "wrote " << panel.num_hours() << " hours x " << panel.num_entities()
            << " entities to " << out.string() << '\n';
  return kOk;
}

int run_forecast_command(const ForecastOptions& options) {
  if (options.horizon < 1 || options.horizon > 168) {
    throw ConfigError("--horizon must be in [1, 168]");
  }
  const Snapshot snap = load_snapshot(options.snapshot);
  const auto& st = snap.state;
  if (!st.last_timestamp || st.recent_loads.empty()) {
    throw DataError("snapshot has not learned any data");
  }
  const Timestamp at = options.at.empty() ? *st.last_timestamp : flag_time(options.at, "--at");
  if (at.utc != st.last_timestamp->utc) {
    throw DataError("snapshot state ends at " + format_timestamp(*st.last_timestamp) +
                    "; forecasts can only be issued from that hour");
  }
  IngestOptions ingest_options;
  ingest_options.celsius = options.celsius;
  ingest_options.holidays = options.holidays;
  const EntityPanel panel = ingest(fs::path(options.data), ingest_options);
  if (panel.entity_ids != snap.entity_ids) {
    throw DataError("data entities do not match the snapshot's entities");
  }
  const int t = find_hour(panel, at);
  const int horizon = options.horizon;
  if (t < 0 || t + horizon >= panel.num_hours()) {
    throw DataError("data must cover the " + std::to_string(horizon) + " hours after " +
                    format_timestamp(at) + " to supply temperatures");
  }
  const auto k = static_cast<Eigen::Index>(panel.num_entities());
  RowMatrix temps(horizon, k), actuals(horizon, k);
  std::vector<bool> holidays(static_cast<std::size_t>(horizon));
  for (int i = 1; i <= horizon; ++i) {
    temps.row(i - 1) = panel.temperatures.row(t + i);
    actuals.row(i - 1) = panel.loads.row(t + i);
    holidays[static_cast<std::size_t>(i - 1)] = panel.holidays[static_cast<std::size_t>(t + i)];
  }
  const Timestamp issued{at.utc, panel.timestamps[static_cast<std::size_t>(t)].offset};
  const Forecast f = predict_horizon(st.bank, st.ctx, issued, st.recent_loads.back(), temps, holidays);
  const auto records = to_records(f, snap.entity_ids, &actuals);

  if (options.out.empty()) {
    options.csv ? write_forecast_csv(records, std::cout) : write_jsonl(records, std::cout);
  } else {
    guard_output(options.out, {options.snapshot, options.data, options.holidays});
    auto out = open_output(options.out);
    options.csv ? write_forecast_csv(records, out) : write_jsonl(records, out);
  }
  return kOk;
}

int run_snapshot_save_command(const SnapshotSaveOptions& options) {
  const RunConfig cfg = resolve(options.config, options.overrides);
  guard_output(options.out, {options.config, cfg.data, cfg.holidays});
  const EntityPanel panel = load_panel(cfg);
  int last = panel.num_hours() - 1;
  if (!options.until.empty()) {
    last = find_hour(panel, flag_time(options.until, "--until"));
    if (last < 0) throw DataError("--until " + options.until + " is not an hour of the data");
  }
  BacktestConfig learn_only = cfg.backtest;
  learn_only.run_baseline = false;
  learn_only.keep_error_samples = false;
  Backtester bt(panel.entity_ids, learn_only);
  for (int t = 0; t <= last; ++t) bt.push(hour_of(panel, t));
  bt.finish();
  const fs::path out = options.out;
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  save_snapshot(Snapshot{panel.entity_ids, bt.state()}, out);
  fs::path resolved = out;
  resolved.replace_extension(".resolved.json");
  guard_output(resolved, {options.config, cfg.data, cfg.holidays});
  open_output(resolved) << dump_run_config(cfg) << '\n';
  std::cout << "learned " << last + 1 << " hours through "
            << format_timestamp(*bt.state().last_timestamp) << "; snapshot written to "
            << out.string() << '\n';
  return kOk;
}

int run_snapshot_show_command(const std::string& path) {
  const Snapshot snap = load_snapshot(path);
  const auto& st = snap.state;
  const auto& bank = st.bank;
  nlohmann::json j;
  j["format_version"] = kSnapshotVersion;
  j["entities"] = snap.entity_ids;
  j["calendar_scheme"] = std::string(bank.scheme().id());
  j["lambda_s"] = bank.lambda_s();
  j["lambda_r"] = bank.lambda_r();
  j["hours_seen"] = st.hours_seen;
  j["last_timestamp"] = st.last_timestamp ? format_timestamp(*st.last_timestamp) : "";
  nlohmann::json types = nlohmann::json::array();
  for (CalendarType c = 1; c <= bank.calendar_types(); ++c) {
    types.push_back({{"calendar_type", c},
                     {"updates", bank.s_model(c).updates()},
                     {"ready", bank.ready(c)}});
  }
  j["calendar_types"] = types;
  std::cout << j.dump(2) << '\n';
  return kOk;
}

int run_metrics_command(const MetricsOptions& options) {
  const TotalMode mode = parse_total_mode(options.total_mode);
  const auto records = read_jsonl(fs::path(options.log));
  if (records.empty()) throw DataError("forecast log " + options.log + " is empty");
  const MetricsReport report = report_from_records(records);
  const std::vector<const MetricsReport*> reports{&report};
  if (options.output_dir.empty()) {
    write_metrics_csv(reports, mode, std::cout);
    return kOk;
  }
  fs::create_directories(options.output_dir);
  write_reports(options.output_dir, reports, mode, {options.log});
  print_summary(reports);
  return kOk;
}

}  // namespace mtlf::cli
