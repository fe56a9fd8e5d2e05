#pragma once

#include <vector>

#include "mtlf/calendar.hpp"
#include "mtlf/types.hpp"

namespace mtlf {

/// Load-transition features `[1, s_1, ..., s_K]` built from the previous hour.
class FeatureVectorS {
 public:
  FeatureVectorS() = default;
  explicit FeatureVectorS(Vector values) : values_(std::move(values)) {}

  [[nodiscard]] const Vector& values() const { return values_; }
  [[nodiscard]] Eigen::Index size() const { return values_.size(); }

 private:
  Vector values_;
};

/// Observation features: one `[1, hot_shift, cold_shift]` block per entity,
/// concatenated into a vector of length K * 3.
class FeatureVectorR {
 public:
  FeatureVectorR() = default;
  explicit FeatureVectorR(Vector values) : values_(std::move(values)) {}

  [[nodiscard]] const Vector& values() const { return values_; }
  [[nodiscard]] Eigen::Index size() const { return values_.size(); }

 private:
  Vector values_;
};

/// Temperature thresholds in degrees Fahrenheit.
struct TempThresholds {
  double shift = 20.0;  ///< minimum departure from the calendar-type mean
  double hot = 80.0;    ///< temperatures above this count as extreme
  double cold = 20.0;   ///< temperatures below this count as extreme

  friend bool operator==(const TempThresholds&, const TempThresholds&) = default;
};

enum class TempMeanMode { Cumulative, Exponential };

/// Running mean temperature per (calendar type, entity).
///
/// Single writer: the backtest driver owns it and updates it after the
/// observation features for the hour have been built.
class TempContext {
 public:
  TempContext() = default;
  TempContext(int calendar_types, int entities, TempThresholds thresholds = {},
              TempMeanMode mode = TempMeanMode::Cumulative, double decay = 0.99);

  [[nodiscard]] int calendar_types() const { return calendar_types_; }
  [[nodiscard]] int entities() const { return entities_; }
  [[nodiscard]] const TempThresholds& thresholds() const { return thresholds_; }
  [[nodiscard]] TempMeanMode mode() const { return mode_; }
  [[nodiscard]] double decay() const { return decay_; }

  [[nodiscard]] double mean(CalendarType c, int entity) const;
  [[nodiscard]] long long count(CalendarType c, int entity) const;

  /// Folds one hour of temperatures into the means of calendar type `c`.
  void update(CalendarType c, const Eigen::Ref<const Vector>& temps);

  /// Raw per-cell state for snapshots: the running sum in cumulative mode,
  /// the running mean in exponential mode.
  [[nodiscard]] double accumulator(CalendarType c, int entity) const;
  void set_state(CalendarType c, int entity, double accumulator, long long count);

  friend bool operator==(const TempContext&, const TempContext&) = default;

 private:
  [[nodiscard]] std::size_t index(CalendarType c, int entity) const;

  int calendar_types_ = 0;
  int entities_ = 0;
  TempThresholds thresholds_;
  TempMeanMode mode_ = TempMeanMode::Cumulative;
  double decay_ = 0.99;
  std::vector<double> accum_;
  std::vector<long long> counts_;
};

FeatureVectorS build_feature_s(const Eigen::Ref<const Vector>& prev_loads);

FeatureVectorR build_feature_r(const Eigen::Ref<const Vector>& temps,
                               const TempContext& ctx, CalendarType c);

}  // namespace mtlf
