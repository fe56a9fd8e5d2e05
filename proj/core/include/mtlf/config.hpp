#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "mtlf/backtest.hpp"
#include "mtlf/forecast_io.hpp"
#include "mtlf/synthetic.hpp"

namespace mtlf {

/// Everything a CLI run needs. Loaded from one JSON document:
///
///   {
///     "backtest":  { "warmup_days": 30, "prediction_hour": 11, "horizon": 24,
///                    "lambda_s": 0.8, "lambda_r": 0.7,
///                    "thresholds": {"shift": 20, "hot": 80, "cold": 20},
///                    "calendar_scheme": "hour-daytype",
///                    "temp_mean": "cumulative", "temp_mean_decay": 0.99,
///                    "baseline": true, "keep_error_samples": true },
///     "data": "loads.csv", "holidays": "holidays.txt", "celsius": false,
///     "output_dir": "out", "total_mode": "pooled", "seed": 1,
///     "synthetic": { ... }
///   }
///
/// Every key is optional; unknown keys are rejected.
struct RunConfig {
  BacktestConfig backtest;
  std::optional<SyntheticSpec> synthetic;
  std::string data;
  std::string holidays;
  bool celsius = false;
  std::string output_dir = ".";
  TotalMode total_mode = TotalMode::Pooled;
  std::uint64_t seed = 1;

  /// Throws ConfigError on invalid values.
  void validate() const;
};

/// Throws ConfigError on malformed JSON, wrong types, unknown keys or
/// out-of-range values.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Resolved configuration with every default filled in.
std::string dump_run_config(const RunConfig& cfg);

/// The `synthetic` section on its own:
///
///   { "entities": 2, "calendar_scheme": "daytype", "hours": 2000, "seed": 7,
///     "start": "2017-01-02T00:00:00Z", "observation_channel": false,
///     "initial_loads": [..], "entity_ids": [..],
///     "parameters": [ { "load_map": [[..]], "load_cov": [[..]],
///                       "observation_map": [[..]], "observation_cov": [[..]] } ],
///     "temperature": { "mean": 60, "daily_amplitude": [..], "phase_hours": 9,
///                      "annual_amplitude": 0, "noise_sd": 5 },
///     "thresholds": { "shift": 20, "hot": 80, "cold": 20 } }
///
/// Temperature fields take a scalar (shared by all entities) or one value
/// per entity. A single parameter set applies to every calendar type.
SyntheticSpec parse_synthetic_spec(std::string_view json_text);
std::string dump_synthetic_spec(const SyntheticSpec& spec);

}  // namespace mtlf
