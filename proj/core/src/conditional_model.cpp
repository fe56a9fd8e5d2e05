#include "mtlf/conditional_model.hpp"

#include <cmath>
#include <string>

#include "mtlf/errors.hpp"
#include "mtlf/linalg.hpp"

namespace mtlf {
namespace {

constexpr double kStateCap = 1e10;

void check_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw ConfigError("forgetting factor " + std::to_string(lambda) +
                      " outside the valid range (0, 1]");
  }
}

}  // namespace

ConditionalModel::ConditionalModel(int entities, int features, double lambda)
    : mean_map_(Matrix::Zero(entities, features)),
      covariance_(Matrix::Zero(entities, entities)),
      state_(Matrix::Identity(features, features)),
      lambda_(lambda) {
  if (entities < 1 || features < 1) {
    throw DimensionError("conditional model needs positive dimensions");
  }
  check_lambda(lambda);
}

ConditionalModel ConditionalModel::with_parameters(Matrix mean_map, Matrix covariance,
                                                   double lambda) {
  ConditionalModel m(static_cast<int>(mean_map.rows()), static_cast<int>(mean_map.cols()),
                     lambda);
  if (covariance.rows() != mean_map.rows() || covariance.cols() != mean_map.rows()) {
    throw DimensionError("covariance must be K x K for a K-row mean map");
  }
  m.mean_map_ = std::move(mean_map);
  m.covariance_ = std::move(covariance);
  // Treated as fully trained: passes the forecaster's warm-up gate.
  m.gamma_ = 1.0;
  m.updates_ = 1;
  return m;
}

ConditionalModel ConditionalModel::from_state(Matrix mean_map, Matrix covariance,
                                              Matrix state, double gamma, double lambda,
                                              long long updates) {
  const auto k = mean_map.rows();
  const auto d = mean_map.cols();
  if (k < 1 || d < 1 || covariance.rows() != k || covariance.cols() != k ||
      state.rows() != d || state.cols() != d) {
    throw DimensionError("inconsistent conditional model state dimensions");
  }
  check_lambda(lambda);
  ConditionalModel m;
  m.mean_map_ = std::move(mean_map);
  m.covariance_ = std::move(covariance);
  m.state_ = std::move(state);
  m.gamma_ = gamma;
  m.lambda_ = lambda;
  m.updates_ = updates;
  return m;
}

Vector ConditionalModel::predict(const Eigen::Ref<const Vector>& u) const {
  if (u.size() != mean_map_.cols()) {
    throw DimensionError("feature length " + std::to_string(u.size()) +
                         " does not match model dimension " +
                         std::to_string(mean_map_.cols()));
  }
  return mean_map_ * u;
}

void ConditionalModel::update(const Eigen::Ref<const Vector>& u,
                              const Eigen::Ref<const Vector>& s) {
  if (u.size() != mean_map_.cols()) {
    throw DimensionError("feature length " + std::to_string(u.size()) +
                         " does not match model dimension " +
                         std::to_string(mean_map_.cols()));
  }
  if (s.size() != mean_map_.rows()) {
    throw DimensionError("target length " + std::to_string(s.size()) +
                         " does not match entity count " +
                         std::to_string(mean_map_.rows()));
  }
  if (!u.allFinite() || !s.allFinite()) {
    throw NumericalError("non-finite input to conditional model update");
  }

  const Vector pu = state_ * u;
  const double gain = lambda_ + u.dot(pu);
  const Vector err = s - mean_map_ * u;
  const double gamma = lambda_ * gamma_ + 1.0;

  Matrix mean_map = mean_map_ + (err * pu.transpose()) / gain;
  Matrix state = (state_ - (pu * pu.transpose()) / gain) / lambda_;
  if (state.allFinite() && state.trace() > kStateCap) cap_eigenvalues(state, kStateCap);
  const double scale = (lambda_ * lambda_) / (gain * gain);
  Matrix covariance = covariance_ - (covariance_ - scale * (err * err.transpose())) / gamma;
  const double lowest = project_psd(covariance);

  if (!std::isfinite(gain) || !mean_map.allFinite() || !state.allFinite() ||
      !covariance.allFinite()) {
    throw NumericalError("conditional model update diverged (non-finite state)");
  }
  mean_map_ = std::move(mean_map);
  state_ = std::move(state);
  covariance_ = std::move(covariance);
  gamma_ = gamma;
  ++updates_;
  last_min_eig_ = lowest;
}

bool operator==(const ConditionalModel& a, const ConditionalModel& b) {
  return same_values(a.mean_map_, b.mean_map_) &&
         same_values(a.covariance_, b.covariance_) && same_values(a.state_, b.state_) && a.gamma_ == b.gamma_ && a.lambda_ == b.lambda_ &&
         a.updates_ == b.updates_;
}

ConditionalModel update(ConditionalModel model, const Eigen::Ref<const Vector>& u,
                        const Eigen::Ref<const Vector>& s) {
  model.update(u, s);
  return model;
}

}  // namespace mtlf
