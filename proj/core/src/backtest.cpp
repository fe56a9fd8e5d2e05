#include "mtlf/backtest.hpp"

#include <cmath>
#include <string>

#include "mtlf/errors.hpp"
#include "mtlf/linalg.hpp"

namespace mtlf {
namespace {

constexpr std::size_t kBaselineLag = 24;

}  // namespace

void BacktestConfig::validate() const {
  if (warmup_days < 1) throw ConfigError("warmup_days must be >= 1");
  if (horizon < 1 || horizon > 168) throw ConfigError("horizon must be in [1, 168]");
  if (prediction_hour < 0 || prediction_hour > 23) {
    throw ConfigError("prediction_hour must be in [0, 23]");
  }
  if (!(lambda_s > 0.0 && lambda_s <= 1.0)) {
    throw ConfigError("lambda_s = " + std::to_string(lambda_s) +
                      " is outside the valid range (0, 1]");
  }
  if (!(lambda_r > 0.0 && lambda_r <= 1.0)) {
    throw ConfigError("lambda_r = " + std::to_string(lambda_r) +
                      " is outside the valid range (0, 1]");
  }
  if (!(thresholds.shift >= 0.0) || !std::isfinite(thresholds.hot) ||
      !std::isfinite(thresholds.cold)) {
    throw ConfigError("temperature thresholds must be finite with shift >= 0");
  }
  if (temp_mean_mode == TempMeanMode::Exponential &&
      !(temp_mean_decay > 0.0 && temp_mean_decay < 1.0)) {
    throw ConfigError("temp_mean_decay must be in (0, 1)");
  }
}

bool operator==(const BacktestState& a, const BacktestState& b) {
  if (a.recent_loads.size() != b.recent_loads.size()) return false;
  for (std::size_t i = 0; i < a.recent_loads.size(); ++i) {
    if (!same_values(a.recent_loads[i], b.recent_loads[i])) return false;
  }
  return a.bank == b.bank && a.ctx == b.ctx && a.last_timestamp == b.last_timestamp &&
         a.hours_seen == b.hours_seen;
}

BacktestState initial_state(int entities, const BacktestConfig& cfg) {
  cfg.validate();
  BacktestState state;
  state.bank = ModelBank(entities, cfg.scheme, cfg.lambda_s, cfg.lambda_r);
  state.ctx = TempContext(cfg.scheme.count(), entities, cfg.thresholds, cfg.temp_mean_mode,
                          cfg.temp_mean_decay);
  return state;
}

Backtester::Backtester(std::vector<std::string> entity_ids, BacktestConfig cfg)
    : Backtester(entity_ids, cfg, initial_state(static_cast<int>(entity_ids.size()), cfg)) {}

Backtester::Backtester(std::vector<std::string> entity_ids, BacktestConfig cfg,
                       BacktestState resume)
    : entity_ids_(std::move(entity_ids)),
      cfg_(std::move(cfg)),
      state_(std::move(resume)),
      last_pushed_(state_.last_timestamp),
      report_("engine", entity_ids_, cfg_.horizon),
      baseline_("persistence", entity_ids_, cfg_.horizon) {
  cfg_.validate();
  const int k = static_cast<int>(entity_ids_.size());
  if (k < 1) throw DataError("backtest needs at least one entity");
  if (state_.bank.entities() != k || state_.ctx.entities() != k) {
    throw DataError("resumed state does not match the entity count");
  }
  if (!(state_.bank.scheme() == cfg_.scheme)) {
    throw ConfigError("resumed state uses calendar scheme '" +
                      std::string(state_.bank.scheme().id()) + "'");
  }
}

void Backtester::push(const HourRecord& hour) {
  const auto k = static_cast<Eigen::Index>(entity_ids_.size());
  if (hour.loads.size() != k || hour.temperatures.size() != k) {
    throw DataError("hour " + format_timestamp(hour.timestamp) + " has the wrong width");
  }
  if (last_pushed_ && hour.timestamp.utc - last_pushed_->utc != kHour) {
    throw DataError("hour " + format_timestamp(hour.timestamp) +
                    " does not follow " + format_timestamp(*last_pushed_));
  }
  last_pushed_ = hour.timestamp;
  pending_.push_back(hour);
  while (pending_.size() > static_cast<std::size_t>(cfg_.horizon)) process_front();
}

void Backtester::finish() {
  while (!pending_.empty()) process_front();
}

bool Backtester::emission_due(const HourRecord& hour) const {
  return local_hour(hour.timestamp) == cfg_.prediction_hour &&
         state_.hours_seen >= 24LL * cfg_.warmup_days &&
         pending_.size() > static_cast<std::size_t>(cfg_.horizon);
}

void Backtester::process_front() {
  const HourRecord& now = pending_.front();
  if (!state_.recent_loads.empty()) {
    learn_step(state_.bank, state_.ctx, now.timestamp, now.holiday, state_.recent_loads.back(),
               now.loads, now.temperatures);
  }
  state_.recent_loads.push_back(now.loads);
  if (state_.recent_loads.size() > kBaselineLag) state_.recent_loads.pop_front();
  state_.last_timestamp = now.timestamp;
  ++state_.hours_seen;

  if (emission_due(now)) emit(now);
  if (hook_) hook_(*this);
  pending_.pop_front();
}

void Backtester::emit(const HourRecord& now) {
  const int horizon = cfg_.horizon;
  const auto k = static_cast<Eigen::Index>(entity_ids_.size());
  std::vector<bool> holidays(static_cast<std::size_t>(horizon));
  RowMatrix temps(horizon, k);
  RowMatrix actuals(horizon, k);
  for (int i = 1; i <= horizon; ++i) {
    const auto& future = pending_[static_cast<std::size_t>(i)];
    holidays[static_cast<std::size_t>(i - 1)] = future.holiday;
    temps.row(i - 1) = future.temperatures.transpose();
    actuals.row(i - 1) = future.loads.transpose();
  }
  if (!horizon_ready(state_.bank, now.timestamp, horizon, holidays)) {
    ++skipped_untrained_;
    return;
  }

  const Forecast forecast =
      predict_horizon(state_.bank, state_.ctx, now.timestamp, now.loads, temps, holidays);
  for (int i = 1; i <= horizon; ++i) {
    const auto& step = forecast.steps[static_cast<std::size_t>(i - 1)];
    for (Eigen::Index e = 0; e < k; ++e) {
      report_.record(static_cast<int>(e), i, actuals(i - 1, e), step.mean[e],
                     cfg_.keep_error_samples);
    }
  }
  ++report_.forecasts;

  if (cfg_.run_baseline && state_.recent_loads.size() == kBaselineLag) {
    for (int i = 1; i <= horizon; ++i) {
      const auto& same_hour =
          state_.recent_loads[static_cast<std::size_t>(i - 1) % kBaselineLag];
      for (Eigen::Index e = 0; e < k; ++e) {
        baseline_.record(static_cast<int>(e), i, actuals(i - 1, e), same_hour[e],
                         cfg_.keep_error_samples);
      }
    }
    ++baseline_.forecasts;
  }
  if (sink_) sink_(forecast, actuals);
}

BacktestResult run_backtest(const EntityPanel& panel, const BacktestConfig& cfg) {
  panel.validate();
  Backtester bt(panel.entity_ids, cfg);
  BacktestResult result;
  bt.set_forecast_sink([&result](const Forecast& f, const RowMatrix& actuals) {
    result.forecasts.push_back(f);
    result.actuals.push_back(actuals);
  });
  for (int t = 0; t < panel.num_hours(); ++t) {
    bt.push(HourRecord{panel.timestamps[static_cast<std::size_t>(t)],
                       panel.loads.row(t).transpose(), panel.temperatures.row(t).transpose(),
                       panel.holidays[static_cast<std::size_t>(t)]});
  }
  bt.finish();
  result.engine = bt.report();
  result.baseline = bt.baseline_report();
  result.skipped_untrained = bt.skipped_untrained();
  return result;
}

MetricsReport persistence_baseline(const EntityPanel& panel, const BacktestConfig& cfg) {
  BacktestConfig with_baseline = cfg;
  with_baseline.run_baseline = true;
  return run_backtest(panel, with_baseline).baseline;
}

}  // namespace mtlf
