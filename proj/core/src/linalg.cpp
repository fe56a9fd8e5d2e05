#include "mtlf/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace mtlf {

void symmetrize(Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      const double avg = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = avg;
      m(j, i) = avg;
    }
  }
}

double min_eigenvalue(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1) return m(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

double project_psd(Matrix& m) {
  symmetrize(m);
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1) {
    const double v = m(0, 0);
    if (v < 0.0) m(0, 0) = 0.0;
    return v;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  const double lowest = eig.eigenvalues().minCoeff();
  if (lowest >= 0.0) return lowest;
  const Vector clipped = eig.eigenvalues().cwiseMax(0.0);
  m = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
  symmetrize(m);
  return lowest;
}

bool cap_eigenvalues(Matrix& m, double cap) {
  symmetrize(m);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  if (eig.eigenvalues().maxCoeff() <= cap) return false;
  const Vector clipped = eig.eigenvalues().cwiseMin(cap);
  m = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
  symmetrize(m);
  return true;
}

}  // namespace mtlf
