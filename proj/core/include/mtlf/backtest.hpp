#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mtlf/calendar.hpp"
#include "mtlf/features.hpp"
#include "mtlf/forecaster.hpp"
#include "mtlf/metrics.hpp"
#include "mtlf/model_bank.hpp"
#include "mtlf/panel.hpp"

namespace mtlf {

struct BacktestConfig {
  int warmup_days = 30;
  int prediction_hour = 11;
  int horizon = 24;
  double lambda_s = 0.8;
  double lambda_r = 0.7;
  TempThresholds thresholds;
  TempMeanMode temp_mean_mode = TempMeanMode::Cumulative;
  double temp_mean_decay = 0.99;
  CalendarScheme scheme;
  bool run_baseline = true;
  /// Keep pooled absolute errors for CDF export. Costs O(T) memory.
  bool keep_error_samples = true;

  /// Throws ConfigError naming the offending field and its valid range.
  void validate() const;

  friend bool operator==(const BacktestConfig&, const BacktestConfig&) = default;
};

/// One hour of input data.
struct HourRecord {
  Timestamp timestamp;
  Vector loads;
  Vector temperatures;
  bool holiday = false;
};

/// Everything the driver has learned up to and including `last_timestamp`.
/// Restoring it reproduces the subsequent run bit for bit.
struct BacktestState {
  ModelBank bank;
  TempContext ctx;
  /// Loads of the most recent hours, oldest first (at most 24).
  std::deque<Vector> recent_loads;
  std::optional<Timestamp> last_timestamp;
  long long hours_seen = 0;

  friend bool operator==(const BacktestState& a, const BacktestState& b);
};

/// Chronological online backtest.
///
/// Every hour is learned as it arrives. At the configured local hour, once
/// `warmup_days` of data have been learned, a forecast for the next L hours is
/// issued from the bank as it stands and scored against the realised loads.
/// Observed temperatures for those hours stand in for weather forecasts; the
/// driver buffers L hours ahead to provide them, but learning never runs
/// ahead of the emission time.
class Backtester {
 public:
  /// Receives each emitted forecast with the realised loads (L x K).
  using ForecastSink = std::function<void(const Forecast&, const RowMatrix& actuals)>;
  /// Called after each hour has been learned (and any emission scored).
  using HourHook = std::function<void(const Backtester&)>;

  Backtester(std::vector<std::string> entity_ids, BacktestConfig cfg);
  Backtester(std::vector<std::string> entity_ids, BacktestConfig cfg, BacktestState resume);

  void set_forecast_sink(ForecastSink sink) { sink_ = std::move(sink); }
  void set_hour_hook(HourHook hook) { hook_ = std::move(hook); }

  /// Feeds the next hour. Throws DataError when it does not follow the
  /// previous hour by exactly one hour or has the wrong width.
  void push(const HourRecord& hour);
  /// Learns the buffered tail; no forecasts are issued for it.
  void finish();

  [[nodiscard]] const BacktestConfig& config() const { return cfg_; }
  [[nodiscard]] const BacktestState& state() const { return state_; }
  [[nodiscard]] const MetricsReport& report() const { return report_; }
  [[nodiscard]] const MetricsReport& baseline_report() const { return baseline_; }
  /// Emission slots skipped because a calendar type on the path was untrained.
  [[nodiscard]] long long skipped_untrained() const { return skipped_untrained_; }

 private:
  void process_front();
  bool emission_due(const HourRecord& hour) const;
  void emit(const HourRecord& now);

  std::vector<std::string> entity_ids_;
  BacktestConfig cfg_;
  BacktestState state_;
  std::deque<HourRecord> pending_;
  std::optional<Timestamp> last_pushed_;
  MetricsReport report_;
  MetricsReport baseline_;
  long long skipped_untrained_ = 0;
  ForecastSink sink_;
  HourHook hook_;
};

struct BacktestResult {
  MetricsReport engine;
  MetricsReport baseline;
  std::vector<Forecast> forecasts;
  std::vector<RowMatrix> actuals;
  long long skipped_untrained = 0;
};

/// Runs the engine (and the persistence baseline when enabled) over a panel.
/// A panel too short for any emission yields empty reports.
BacktestResult run_backtest(const EntityPanel& panel, const BacktestConfig& cfg);

/// Persistence baseline alone: ŝ(t+i) = load at the same clock hour on the
/// most recent observed day, on the engine's emission schedule.
MetricsReport persistence_baseline(const EntityPanel& panel, const BacktestConfig& cfg);

/// Fresh learner state for a configuration.
BacktestState initial_state(int entities, const BacktestConfig& cfg);

}  // namespace mtlf
