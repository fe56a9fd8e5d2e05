#include "mtlf/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "mtlf/errors.hpp"

namespace mtlf {

void ErrorStats::add(double actual, double predicted) {
  const double err = actual - predicted;
  ++count;
  sum_squared += err * err;
  sum_absolute += std::abs(err);
  if (actual == 0.0) {
    ++zero_excluded;
  } else {
    ++percentage_count;
    sum_absolute_percentage += std::abs(err) / std::abs(actual);
  }
}

void ErrorStats::merge(const ErrorStats& other) {
  count += other.count;
  sum_squared += other.sum_squared;
  sum_absolute += other.sum_absolute;
  percentage_count += other.percentage_count;
  sum_absolute_percentage += other.sum_absolute_percentage;
  zero_excluded += other.zero_excluded;
}

double ErrorStats::rmse() const {
  if (count == 0) throw DataError("RMSE of an empty error set");
  return std::sqrt(sum_squared / static_cast<double>(count));
}

double ErrorStats::mae() const {
  if (count == 0) throw DataError("MAE of an empty error set");
  return sum_absolute / static_cast<double>(count);
}

double ErrorStats::mape() const {
  if (percentage_count == 0) throw DataError("MAPE of an empty error set");
  return 100.0 * sum_absolute_percentage / static_cast<double>(percentage_count);
}

namespace {

ErrorStats accumulate(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size()) {
    throw DataError("actual and predicted series differ in length");
  }
  ErrorStats stats;
  for (std::size_t i = 0; i < actual.size(); ++i) stats.add(actual[i], predicted[i]);
  return stats;
}

}  // namespace

double mape(std::span<const double> actual, std::span<const double> predicted) {
  return accumulate(actual, predicted).mape();
}

double rmse(std::span<const double> actual, std::span<const double> predicted) {
  return accumulate(actual, predicted).rmse();
}

std::vector<CdfPoint> error_cdf(std::vector<double> samples) {
  if (samples.empty()) throw DataError("CDF of an empty error set");
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  std::vector<CdfPoint> cdf;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
    cdf.push_back(CdfPoint{samples[i], static_cast<double>(i + 1) / n});
  }
  return cdf;
}

double cdf_quantile(const std::vector<CdfPoint>& cdf, double probability) {
  if (cdf.empty()) throw DataError("quantile of an empty CDF");
  for (const auto& p : cdf) {
    if (p.probability >= probability) return p.value;
  }
  return cdf.back().value;
}

MetricsReport::MetricsReport(std::string method, std::vector<std::string> ids, int horizon)
    : method(std::move(method)),
      entity_ids(std::move(ids)),
      per_entity(entity_ids.size()),
      per_horizon(static_cast<std::size_t>(horizon)) {}

double MetricsReport::mean_entity_mape() const {
  if (per_entity.empty()) throw DataError("no entities in report");
  double sum = 0.0;
  for (const auto& e : per_entity) sum += e.mape();
  return sum / static_cast<double>(per_entity.size());
}

void MetricsReport::record(int entity, int horizon_step, double actual, double predicted,
                           bool keep_sample) {
  per_entity[static_cast<std::size_t>(entity)].add(actual, predicted);
  per_horizon[static_cast<std::size_t>(horizon_step - 1)].add(actual, predicted);
  total.add(actual, predicted);
  if (keep_sample) absolute_errors.push_back(std::abs(actual - predicted));
}

}  // namespace mtlf
