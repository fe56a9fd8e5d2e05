#pragma once

#include <vector>

#include "mtlf/types.hpp"

namespace mtlf {

/// Dense reference solution of the exponentially weighted least-squares
/// problem that the recursive estimator tracks.
struct WlsSolution {
  Matrix mean_map;   ///< K x D minimiser
  Matrix state;      ///< inverse of the weighted Gram matrix (prior included)
  double gamma = 0;  ///< Σ λ^{n-i}
  double condition = 0;  ///< 2-norm condition number of the weighted Gram
};

/// Solves min_M Σ_i λ^{n-i} ‖s_i - M u_i‖² + λⁿ prior_scale ‖M‖²_F by the
/// normal equations. `prior_scale` = 1 matches a recursion started from
/// P = I; 0 gives plain weighted least squares (needs a full-rank Gram).
/// Throws DimensionError on empty or ragged input, NumericalError when the
/// Gram matrix is singular.
WlsSolution wls_oracle(const std::vector<Vector>& us, const std::vector<Vector>& ss,
                       double lambda, double prior_scale = 1.0);

/// Product of N(mu1, W1) and N(mu2, W2) in precision form:
///   cov = (W1⁻¹ + W2⁻¹)⁻¹,  mean = cov (W1⁻¹ mu1 + W2⁻¹ mu2).
/// Throws NumericalError when either covariance is not SPD.
struct FusionResult {
  Vector mean;
  Matrix cov;
};
FusionResult fusion_oracle(const Vector& mu1, const Matrix& w1, const Vector& mu2,
                           const Matrix& w2);

}  // namespace mtlf
