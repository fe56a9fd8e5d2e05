#include "mtlf/forecaster.hpp"

#include <Eigen/Cholesky>
#include <string>

#include "mtlf/errors.hpp"
#include "mtlf/linalg.hpp"

namespace mtlf {
namespace {

constexpr double kMinReciprocalCondition = 1e-12;
constexpr double kJitterScale = 1e-8;

bool usable(const Eigen::LDLT<Matrix>& ldlt) {
  return ldlt.info() == Eigen::Success && ldlt.isPositive() &&
         ldlt.rcond() > kMinReciprocalCondition;
}

Timestamp step_time(const Timestamp& t, int i) {
  return Timestamp{t.utc + i * kHour, t.offset};
}

}  // namespace

Matrix selector(int entities) {
  Matrix n = Matrix::Zero(entities + 1, entities);
  n.bottomRows(entities).setIdentity();
  return n;
}

Gaussian fuse(const Vector& mu_s, const Matrix& w1, const Vector& mu_r, const Matrix& w2) {
  const auto k = mu_s.size();
  if (mu_r.size() != k || w1.rows() != k || w1.cols() != k || w2.rows() != k ||
      w2.cols() != k) {
    throw DimensionError("fusion inputs have inconsistent dimensions");
  }
  Matrix total = w1 + w2;
  Eigen::LDLT<Matrix> ldlt(total);
  if (!usable(ldlt)) {
    const double eps = kJitterScale * total.trace() / static_cast<double>(k);
    total.diagonal().array() += eps;
    ldlt.compute(total);
    if (!(eps > 0.0) || !usable(ldlt)) {
      throw NumericalError("singular fusion system W1 + W2");
    }
  }
  Matrix rhs(k, 2);
  rhs.col(0) = mu_r;
  rhs.col(1) = mu_s;
  const Matrix solved = ldlt.solve(rhs);
  Gaussian out;
  out.mean = w1 * solved.col(0) + w2 * solved.col(1);
  out.cov = w2 * ldlt.solve(w1);
  project_psd(out.cov);
  if (!out.mean.allFinite() || !out.cov.allFinite()) {
    throw NumericalError("non-finite fused forecast");
  }
  return out;
}

Gaussian propagate_and_fuse(const ConditionalModel& s_model, const Vector& observation_mean,
                            const Matrix& observation_cov, const Vector& prev_mean,
                            const Matrix& prev_cov) {
  const auto k = prev_mean.size();
  if (s_model.entities() != k || s_model.features() != k + 1 || prev_cov.rows() != k ||
      prev_cov.cols() != k) {
    throw DimensionError("load-transition model does not match the forecast state");
  }
  Vector u_hat(k + 1);
  u_hat[0] = 1.0;
  u_hat.tail(k) = prev_mean;
  const Vector mu_s = s_model.mean_map() * u_hat;
  const auto transition = s_model.mean_map().rightCols(k);
  const Matrix w1 = s_model.covariance() + transition * prev_cov * transition.transpose();
  return fuse(mu_s, w1, observation_mean, observation_cov);
}

Gaussian predict_step(const ConditionalModel& s_model, const ConditionalModel& r_model,
                      const Vector& prev_mean, const Matrix& prev_cov,
                      const FeatureVectorR& u_r) {
  return propagate_and_fuse(s_model, r_model.predict(u_r.values()), r_model.covariance(),
                            prev_mean, prev_cov);
}

bool horizon_ready(const ModelBank& bank, const Timestamp& t, int horizon,
                   const std::vector<bool>& holidays) {
  for (int i = 1; i <= horizon; ++i) {
    const bool holiday = !holidays.empty() && holidays[static_cast<std::size_t>(i - 1)];
    if (!bank.ready(bank.scheme().classify(step_time(t, i), holiday))) return false;
  }
  return true;
}

Forecast predict_horizon(const ModelBank& bank, const TempContext& ctx, const Timestamp& t,
                         const Vector& s_t, const RowMatrix& temps_path,
                         const std::vector<bool>& holidays) {
  const int k = bank.entities();
  const auto horizon = static_cast<int>(temps_path.rows());
  if (horizon < 1) throw DimensionError("forecast horizon must be at least 1");
  if (s_t.size() != k || temps_path.cols() != k) {
    throw DimensionError("forecast inputs do not match the bank's entity count");
  }
  if (!holidays.empty() && static_cast<int>(holidays.size()) != horizon) {
    throw DimensionError("holiday flags must cover the horizon");
  }

  Forecast forecast;
  forecast.issued_at = t;
  forecast.steps.reserve(static_cast<std::size_t>(horizon));
  Vector mean = s_t;
  Matrix cov = Matrix::Zero(k, k);
  for (int i = 1; i <= horizon; ++i) {
    const Timestamp ti = step_time(t, i);
    const bool holiday = !holidays.empty() && holidays[static_cast<std::size_t>(i - 1)];
    const CalendarType c = bank.scheme().classify(ti, holiday);
    if (!bank.ready(c)) {
      throw DataError("calendar type " + std::to_string(c) + " has no trained model at " +
                      format_timestamp(ti));
    }
    const Vector temps = temps_path.row(i - 1).transpose();
    const auto u_r = build_feature_r(temps, ctx, c);
    Gaussian g;
    try {
      g = predict_step(bank.s_model(c), bank.r_model(c), mean, cov, u_r);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " (calendar type " + std::to_string(c) +
                           " at " + format_timestamp(ti) + ")");
    }
    mean = g.mean;
    cov = g.cov;
    forecast.steps.push_back(ForecastStep{ti, i, c, std::move(g.mean), std::move(g.cov)});
  }
  return forecast;
}

}  // namespace mtlf
