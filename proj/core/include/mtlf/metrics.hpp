#pragma once

#include <span>
#include <string>
#include <vector>

namespace mtlf {

/// Streaming accumulator for RMSE and MAPE.
///
/// MAPE skips points whose realised load is exactly zero and counts them in
/// `zero_excluded`. Merging is associative, so reductions may be split.
struct ErrorStats {
  long long count = 0;
  double sum_squared = 0.0;
  double sum_absolute = 0.0;
  long long percentage_count = 0;
  double sum_absolute_percentage = 0.0;
  long long zero_excluded = 0;

  void add(double actual, double predicted);
  void merge(const ErrorStats& other);

  [[nodiscard]] bool empty() const { return count == 0; }
  /// Throws DataError when no point has been added.
  [[nodiscard]] double rmse() const;
  /// Percent. Throws DataError when no point with a nonzero actual exists.
  [[nodiscard]] double mape() const;
  [[nodiscard]] double mae() const;
};

/// MAPE in percent over paired samples; zero actuals are skipped. Throws
/// DataError on empty or mismatched input.
double mape(std::span<const double> actual, std::span<const double> predicted);

/// RMSE over paired samples. Throws DataError on empty or mismatched input.
double rmse(std::span<const double> actual, std::span<const double> predicted);

struct CdfPoint {
  double value;
  double probability;

  friend bool operator==(const CdfPoint&, const CdfPoint&) = default;
};

/// Empirical CDF: one point per distinct value, probability = fraction of
/// samples <= value. Throws DataError on empty input.
std::vector<CdfPoint> error_cdf(std::vector<double> samples);

/// Smallest sample value whose empirical CDF reaches `probability`.
double cdf_quantile(const std::vector<CdfPoint>& cdf, double probability);

/// Accuracy of one forecasting method over a backtest.
struct MetricsReport {
  std::string method;
  std::vector<std::string> entity_ids;
  std::vector<ErrorStats> per_entity;
  ErrorStats total;  ///< pooled over all entities
  std::vector<ErrorStats> per_horizon;
  std::vector<double> absolute_errors;  ///< pooled, when sample retention is on
  long long forecasts = 0;

  MetricsReport() = default;
  MetricsReport(std::string method, std::vector<std::string> entity_ids, int horizon);

  [[nodiscard]] bool empty() const { return forecasts == 0; }
  /// Unweighted mean of per-entity MAPEs (alternative TOTAL definition).
  [[nodiscard]] double mean_entity_mape() const;

  void record(int entity, int horizon_step, double actual, double predicted,
              bool keep_sample);
};

}  // namespace mtlf
