#pragma once

#include "mtlf/types.hpp"

namespace mtlf {

/// Shape-checked exact equality.
template <typename A, typename B>
bool same_values(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

/// Replaces `m` with (m + mᵀ)/2.
void symmetrize(Matrix& m);

/// Symmetrizes `m` and clips negative eigenvalues to zero. The matrix is
/// left bit-for-bit untouched (apart from symmetrization) when it is already
/// PSD. Returns the smallest eigenvalue observed before clipping.
double project_psd(Matrix& m);

/// Symmetrizes `m` and clips eigenvalues above `cap`. Returns true when any
/// eigenvalue was clipped.
bool cap_eigenvalues(Matrix& m, double cap);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& m);

}  // namespace mtlf
