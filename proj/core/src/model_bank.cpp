#include "mtlf/model_bank.hpp"

#include <string>

#include "mtlf/errors.hpp"

namespace mtlf {

ModelBank::ModelBank(int entities, CalendarScheme scheme, double lambda_s, double lambda_r)
    : entities_(entities), scheme_(scheme), lambda_s_(lambda_s), lambda_r_(lambda_r) {
  if (entities < 1) throw DimensionError("model bank needs at least one entity");
  entries_.reserve(static_cast<std::size_t>(scheme.count()));
  for (int c = 0; c < scheme.count(); ++c) {
    entries_.push_back(Entry{ConditionalModel(entities, entities + 1, lambda_s),
                             ConditionalModel(entities, entities * kObservationFeatures,
                                              lambda_r)});
  }
}

std::size_t ModelBank::slot(CalendarType c) const {
  if (c < 1 || c > calendar_types()) {
    throw DimensionError("calendar type " + std::to_string(c) + " outside [1, " +
                         std::to_string(calendar_types()) + "]");
  }
  return static_cast<std::size_t>(c - 1);
}

const ConditionalModel& ModelBank::s_model(CalendarType c) const { return entries_[slot(c)].s; }
const ConditionalModel& ModelBank::r_model(CalendarType c) const { return entries_[slot(c)].r; }
ConditionalModel& ModelBank::s_model(CalendarType c) { return entries_[slot(c)].s; }
ConditionalModel& ModelBank::r_model(CalendarType c) { return entries_[slot(c)].r; }

void ModelBank::set_models(CalendarType c, ConditionalModel s_model,
                           ConditionalModel r_model) {
  const auto i = slot(c);
  if (s_model.entities() != entities_ || s_model.features() != entities_ + 1) {
    throw DimensionError("load-transition model must be K x (K+1)");
  }
  if (r_model.entities() != entities_ ||
      r_model.features() != entities_ * kObservationFeatures) {
    throw DimensionError("observation model must be K x 3K");
  }
  entries_[i] = Entry{std::move(s_model), std::move(r_model)};
}

bool ModelBank::ready(CalendarType c) const {
  const auto& e = entries_[slot(c)];
  return e.s.gamma() >= 1.0 && e.r.gamma() >= 1.0;
}

CalendarType learn_step(ModelBank& bank, TempContext& ctx, const Timestamp& t,
                        bool holiday, const Eigen::Ref<const Vector>& s_prev,
                        const Eigen::Ref<const Vector>& s_now,
                        const Eigen::Ref<const Vector>& temps_now) {
  const CalendarType c = bank.scheme().classify(t, holiday);
  try {
    const auto u_s = build_feature_s(s_prev);
    const auto u_r = build_feature_r(temps_now, ctx, c);
    ConditionalModel s_next = update(bank.s_model(c), u_s.values(), s_now);
    ConditionalModel r_next = update(bank.r_model(c), u_r.values(), s_now);
    bank.s_model(c) = std::move(s_next);
    bank.r_model(c) = std::move(r_next);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(e.what()) + " (calendar type " + std::to_string(c) +
                         " at " + format_timestamp(t) + ")");
  }
  ctx.update(c, temps_now);
  return c;
}

}  // namespace mtlf
