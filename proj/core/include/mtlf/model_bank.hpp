#pragma once

#include <vector>

#include "mtlf/calendar.hpp"
#include "mtlf/conditional_model.hpp"
#include "mtlf/features.hpp"
#include "mtlf/timestamp.hpp"

namespace mtlf {

/// Full parameter set: one load-transition model (D = K+1, λ_s) and one
/// observation model (D = 3K, λ_r) per calendar type.
///
/// A bank is a plain value. Copying it yields a consistent snapshot that a
/// forecaster can read while learning continues on the original.
class ModelBank {
 public:
  ModelBank() = default;
  ModelBank(int entities, CalendarScheme scheme, double lambda_s = 0.8,
            double lambda_r = 0.7);

  [[nodiscard]] int entities() const { return entities_; }
  [[nodiscard]] int calendar_types() const { return scheme_.count(); }
  [[nodiscard]] const CalendarScheme& scheme() const { return scheme_; }
  [[nodiscard]] double lambda_s() const { return lambda_s_; }
  [[nodiscard]] double lambda_r() const { return lambda_r_; }

  [[nodiscard]] const ConditionalModel& s_model(CalendarType c) const;
  [[nodiscard]] const ConditionalModel& r_model(CalendarType c) const;
  ConditionalModel& s_model(CalendarType c);
  ConditionalModel& r_model(CalendarType c);

  /// Replaces both models of calendar type `c` after checking dimensions.
  void set_models(CalendarType c, ConditionalModel s_model, ConditionalModel r_model);

  /// True once both models of `c` have absorbed at least one update.
  [[nodiscard]] bool ready(CalendarType c) const;

  friend bool operator==(const ModelBank&, const ModelBank&) = default;

 private:
  struct Entry {
    ConditionalModel s;
    ConditionalModel r;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  [[nodiscard]] std::size_t slot(CalendarType c) const;

  int entities_ = 0;
  CalendarScheme scheme_;
  double lambda_s_ = 0.8;
  double lambda_r_ = 0.7;
  std::vector<Entry> entries_;
};

/// One hour of online learning.
///
/// Updates the load-transition model of c(t) with ([1, s_prev], s_now), then
/// the observation model of c(t) with (u_r(temps_now), s_now), and finally
/// folds temps_now into the temperature context. The observation features
/// therefore compare against strictly past temperatures. Returns c(t).
///
/// Throws NumericalError naming the calendar type and timestamp when an
/// update diverges; bank and context are then left as they were.
CalendarType learn_step(ModelBank& bank, TempContext& ctx, const Timestamp& t,
                        bool holiday, const Eigen::Ref<const Vector>& s_prev,
                        const Eigen::Ref<const Vector>& s_now,
                        const Eigen::Ref<const Vector>& temps_now);

}  // namespace mtlf
