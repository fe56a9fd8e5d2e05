#pragma once

#include "mtlf/types.hpp"

namespace mtlf {

/// One conditional Gaussian N(s; M u, Σ) together with the recursive
/// estimator state that tracks it under exponential forgetting.
///
/// `P` is the inverse of the λ-weighted feature Gram matrix (plus the decayed
/// prior term) and `gamma` the effective sample size Σ λ^{n-i}. Fresh models
/// start from M = 0, Σ = 0, P = I_D and γ = 0.
class ConditionalModel {
 public:
  ConditionalModel() = default;
  ConditionalModel(int entities, int features, double lambda);

  /// Builds a model with explicit parameters, e.g. to inject known truth.
  static ConditionalModel with_parameters(Matrix mean_map, Matrix covariance,
                                          double lambda);
  /// Restores the full estimator state. Throws DimensionError on mismatch.
  static ConditionalModel from_state(Matrix mean_map, Matrix covariance, Matrix state,
                                     double gamma, double lambda, long long updates);

  [[nodiscard]] const Matrix& mean_map() const { return mean_map_; }
  [[nodiscard]] const Matrix& covariance() const { return covariance_; }
  [[nodiscard]] const Matrix& state() const { return state_; }
  [[nodiscard]] double gamma() const { return gamma_; }
  [[nodiscard]] double lambda() const { return lambda_; }
  [[nodiscard]] long long updates() const { return updates_; }
  [[nodiscard]] int entities() const { return static_cast<int>(mean_map_.rows()); }
  [[nodiscard]] int features() const { return static_cast<int>(mean_map_.cols()); }

  /// Mean prediction M u.
  [[nodiscard]] Vector predict(const Eigen::Ref<const Vector>& u) const;

  /// Applies one recursive update with feature vector `u` and target `s`.
  ///
  /// With e = s - M u and g = λ + uᵀPu:
  ///   M ← M + e uᵀP / g
  ///   P ← (P - P u uᵀ P / g) / λ
  ///   γ ← λγ + 1
  ///   Σ ← Σ - (Σ - λ² e eᵀ / g²) / γ
  /// M uses the pre-update P and Σ the post-update γ. Σ is symmetrized and
  /// projected onto the PSD cone afterwards. Eigenvalues of P above 1e10 are
  /// clipped, which bounds growth along never-excited feature directions. Throws DimensionError or
  /// NumericalError; on error the model is left unchanged.
  void update(const Eigen::Ref<const Vector>& u, const Eigen::Ref<const Vector>& s);

  /// Smallest eigenvalue of Σ seen before the last PSD projection.
  [[nodiscard]] double last_min_eigenvalue() const { return last_min_eig_; }

  friend bool operator==(const ConditionalModel& a, const ConditionalModel& b);

 private:
  Matrix mean_map_;
  Matrix covariance_;
  Matrix state_;
  double gamma_ = 0.0;
  double lambda_ = 1.0;
  long long updates_ = 0;
  double last_min_eig_ = 0.0;
};

/// Value-returning form of ConditionalModel::update.
[[nodiscard]] ConditionalModel update(ConditionalModel model,
                                      const Eigen::Ref<const Vector>& u,
                                      const Eigen::Ref<const Vector>& s);

}  // namespace mtlf
