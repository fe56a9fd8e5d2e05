#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mtlf/forecaster.hpp"
#include "mtlf/metrics.hpp"

namespace mtlf {

/// One (horizon step, entity) line of the forecast log.
struct ForecastRecord {
  std::string issued_at;
  std::string timestamp;
  int horizon_step = 0;
  int calendar_type = 0;
  std::string entity_id;
  double mean = 0.0;
  double variance = 0.0;
  std::vector<double> cov_row;
  std::optional<double> actual;

  friend bool operator==(const ForecastRecord&, const ForecastRecord&) = default;
};

/// Flattens a forecast into per-entity records. `actuals` (L x K) is optional.
std::vector<ForecastRecord> to_records(const Forecast& forecast,
                                       const std::vector<std::string>& entity_ids,
                                       const RowMatrix* actuals = nullptr);

/// JSON lines: {"issued_at", "timestamp", "horizon_step", "calendar_type",
/// "entity_id", "mean", "variance", "cov_row"[, "actual"]}.
void write_jsonl(const std::vector<ForecastRecord>& records, std::ostream& out);
std::vector<ForecastRecord> read_jsonl(std::istream& in);
std::vector<ForecastRecord> read_jsonl(const std::filesystem::path& path);

/// Compact CSV: issued_at,timestamp,horizon_step,entity_id,mean,variance[,actual].
void write_forecast_csv(const std::vector<ForecastRecord>& records, std::ostream& out);

/// Rebuilds an accuracy report from logged records that carry actuals.
/// Entities keep their order of first appearance. Throws DataError when a
/// record lacks an actual.
MetricsReport report_from_records(const std::vector<ForecastRecord>& records,
                                  const std::string& method = "engine");

enum class TotalMode { Pooled, Mean, Both };

TotalMode parse_total_mode(const std::string& text);
std::string to_string(TotalMode mode);

/// Table-style CSV: one row per entity plus TOTAL (and TOTAL_MEAN for
/// `Mean`/`Both`); columns <method>_MAPE and <method>_RMSE per report.
void write_metrics_csv(const std::vector<const MetricsReport*>& reports, TotalMode mode,
                       std::ostream& out);

/// Same content as JSON, plus per-horizon breakdown and zero-load counts.
std::string metrics_json(const std::vector<const MetricsReport*>& reports, TotalMode mode);

/// `abs_error,probability` rows.
void write_cdf_csv(const std::vector<CdfPoint>& cdf, std::ostream& out);

}  // namespace mtlf
