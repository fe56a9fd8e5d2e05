#pragma once

#include <Eigen/Core>

namespace mtlf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
/// Time-major storage: row t holds the K entity values at hour t.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Features per entity in the observation map.
inline constexpr int kObservationFeatures = 3;

}  // namespace mtlf
