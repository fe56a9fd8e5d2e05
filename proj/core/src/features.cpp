#include "mtlf/features.hpp"

#include <cmath>
#include <string>

#include "mtlf/errors.hpp"

namespace mtlf {

TempContext::TempContext(int calendar_types, int entities, TempThresholds thresholds,
                         TempMeanMode mode, double decay)
    : calendar_types_(calendar_types),
      entities_(entities),
      thresholds_(thresholds),
      mode_(mode),
      decay_(decay),
      accum_(static_cast<std::size_t>(calendar_types) * entities, 0.0),
      counts_(static_cast<std::size_t>(calendar_types) * entities, 0) {
  if (calendar_types < 1 || entities < 1) {
    throw DimensionError("temperature context needs at least one calendar type and entity");
  }
  if (mode == TempMeanMode::Exponential && !(decay > 0.0 && decay < 1.0)) {
    throw ConfigError("exponential temperature mean needs a decay in (0, 1)");
  }
}

std::size_t TempContext::index(CalendarType c, int entity) const {
  if (c < 1 || c > calendar_types_ || entity < 0 || entity >= entities_) {
    throw DimensionError("calendar type " + std::to_string(c) + " / entity " +
                         std::to_string(entity) + " out of range");
  }
  return static_cast<std::size_t>(c - 1) * entities_ + entity;
}

double TempContext::mean(CalendarType c, int entity) const {
  const auto i = index(c, entity);
  if (mode_ == TempMeanMode::Exponential || counts_[i] == 0) return accum_[i];
  return accum_[i] / static_cast<double>(counts_[i]);
}

double TempContext::accumulator(CalendarType c, int entity) const {
  return accum_[index(c, entity)];
}

long long TempContext::count(CalendarType c, int entity) const {
  return counts_[index(c, entity)];
}

void TempContext::update(CalendarType c, const Eigen::Ref<const Vector>& temps) {
  if (temps.size() != entities_) {
    throw DimensionError("temperature vector length does not match entity count");
  }
  for (int k = 0; k < entities_; ++k) {
    const auto i = index(c, k);
    const long long n = ++counts_[i];
    if (mode_ == TempMeanMode::Cumulative || n == 1) {
      accum_[i] += temps[k];
    } else {
      accum_[i] = decay_ * accum_[i] + (1.0 - decay_) * temps[k];
    }
  }
}

void TempContext::set_state(CalendarType c, int entity, double accumulator,
                            long long count) {
  const auto i = index(c, entity);
  if (count < 0) throw DataError("negative temperature count");
  accum_[i] = accumulator;
  counts_[i] = count;
}

FeatureVectorS build_feature_s(const Eigen::Ref<const Vector>& prev_loads) {
  if (!prev_loads.allFinite()) {
    throw NumericalError("non-finite previous load in feature construction");
  }
  Vector u(prev_loads.size() + 1);
  u[0] = 1.0;
  u.tail(prev_loads.size()) = prev_loads;
  return FeatureVectorS{std::move(u)};
}

FeatureVectorR build_feature_r(const Eigen::Ref<const Vector>& temps,
                               const TempContext& ctx, CalendarType c) {
  const int k_count = ctx.entities();
  if (temps.size() != k_count) {
    throw DimensionError("temperature vector length does not match entity count");
  }
  if (!temps.allFinite()) {
    throw NumericalError("non-finite temperature in feature construction");
  }
  const auto& th = ctx.thresholds();
  Vector u = Vector::Zero(static_cast<Eigen::Index>(k_count) * kObservationFeatures);
  for (int k = 0; k < k_count; ++k) {
    const Eigen::Index base = static_cast<Eigen::Index>(k) * kObservationFeatures;
    u[base] = 1.0;
    if (ctx.count(c, k) == 0) continue;
    const double w = temps[k];
    const double departure = w - ctx.mean(c, k);
    const bool extreme = w > th.hot || w < th.cold;
    if (!extreme) continue;
    if (departure > th.shift) {
      u[base + 1] = 1.0;
    } else if (departure < -th.shift) {
      u[base + 2] = 1.0;
    }
  }
  return FeatureVectorR{std::move(u)};
}

}  // namespace mtlf
