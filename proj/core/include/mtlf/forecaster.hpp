#pragma once

#include <vector>

#include "mtlf/calendar.hpp"
#include "mtlf/conditional_model.hpp"
#include "mtlf/features.hpp"
#include "mtlf/model_bank.hpp"
#include "mtlf/timestamp.hpp"
#include "mtlf/types.hpp"

namespace mtlf {

struct Gaussian {
  Vector mean;
  Matrix cov;
};

/// Predictive Gaussian for one hour of the horizon.
struct ForecastStep {
  Timestamp timestamp;
  int horizon_step = 0;  ///< 1-based
  CalendarType calendar_type = 0;
  Vector mean;
  Matrix cov;
};

struct Forecast {
  Timestamp issued_at;
  std::vector<ForecastStep> steps;

  [[nodiscard]] int horizon() const { return static_cast<int>(steps.size()); }
};

/// The (K+1) x K matrix [0; I_K] that embeds a load vector into the
/// load-transition feature slot, skipping the intercept.
Matrix selector(int entities);

/// Combines the propagated load-transition Gaussian N(mu_s, W1) with the
/// observation-model Gaussian N(mu_r, W2):
///   mean = W1 (W1+W2)⁻¹ mu_r + W2 (W1+W2)⁻¹ mu_s
///   cov  = W2 (W1+W2)⁻¹ W1
/// W1+W2 is factored with LDLT. When that fails or its reciprocal condition
/// estimate drops below 1e-12, ε I with ε = 1e-8 trace(W1+W2)/K is added
/// once. Throws NumericalError if the system is still singular or the
/// result is non-finite.
Gaussian fuse(const Vector& mu_s, const Matrix& w1, const Vector& mu_r, const Matrix& w2);

/// One step of the recursion with the observation-model mean supplied
/// directly instead of through observation features.
Gaussian propagate_and_fuse(const ConditionalModel& s_model, const Vector& observation_mean,
                            const Matrix& observation_cov, const Vector& prev_mean,
                            const Matrix& prev_cov);

/// One step of the recursion: propagate (prev_mean, prev_cov) through the
/// load-transition model and fuse with the observation model evaluated at
/// `u_r`.
Gaussian predict_step(const ConditionalModel& s_model, const ConditionalModel& r_model,
                      const Vector& prev_mean, const Matrix& prev_cov,
                      const FeatureVectorR& u_r);

/// True when every calendar type met by the L hours after `t` is trained.
bool horizon_ready(const ModelBank& bank, const Timestamp& t, int horizon,
                   const std::vector<bool>& holidays = {});

/// Multi-horizon forecast issued at `t`, starting from the observed load
/// vector `s_t` with zero uncertainty. Row i-1 of `temps_path` holds the
/// temperatures for t+i and `holidays[i-1]` its holiday flag (empty means no
/// holidays). `ctx` is only read. Throws DataError if a calendar type on the
/// path has no trained model.
Forecast predict_horizon(const ModelBank& bank, const TempContext& ctx, const Timestamp& t,
                         const Vector& s_t, const RowMatrix& temps_path,
                         const std::vector<bool>& holidays = {});

}  // namespace mtlf
