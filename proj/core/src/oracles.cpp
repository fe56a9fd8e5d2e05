#include "mtlf/oracles.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "mtlf/errors.hpp"

namespace mtlf {

WlsSolution wls_oracle(const std::vector<Vector>& us, const std::vector<Vector>& ss,
                       double lambda, double prior_scale) {
  if (us.empty() || us.size() != ss.size()) {
    throw DimensionError("oracle needs equally many (non-zero) features and targets");
  }
  const auto d = us.front().size();
  const auto k = ss.front().size();
  const auto n = us.size();
  Matrix gram = Matrix::Zero(d, d);
  Matrix cross = Matrix::Zero(k, d);
  WlsSolution out;
  for (std::size_t i = 0; i < n; ++i) {
    if (us[i].size() != d || ss[i].size() != k) throw DimensionError("ragged oracle input");
    const double w = std::pow(lambda, static_cast<double>(n - 1 - i));
    gram += w * us[i] * us[i].transpose();
    cross += w * ss[i] * us[i].transpose();
    out.gamma += w;
  }
  gram.diagonal().array() += prior_scale * std::pow(lambda, static_cast<double>(n));

  const Eigen::JacobiSVD<Matrix> svd(gram);
  const auto& sv = svd.singularValues();
  out.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                           : std::numeric_limits<double>::infinity();
  const Eigen::FullPivLU<Matrix> lu(gram);
  if (!lu.isInvertible()) throw NumericalError("weighted Gram matrix is singular");
  out.state = lu.inverse();
  out.mean_map = lu.solve(cross.transpose()).transpose();
  return out;
}

FusionResult fusion_oracle(const Vector& mu1, const Matrix& w1, const Vector& mu2,
                           const Matrix& w2) {
  const Eigen::LLT<Matrix> l1(w1);
  const Eigen::LLT<Matrix> l2(w2);
  if (l1.info() != Eigen::Success || l2.info() != Eigen::Success) {
    throw NumericalError("fusion oracle requires SPD covariances");
  }
  const auto k = mu1.size();
  const Matrix eye = Matrix::Identity(k, k);
  const Matrix prec = l1.solve(eye) + l2.solve(eye);
  const Eigen::LLT<Matrix> lp(prec);
  if (lp.info() != Eigen::Success) throw NumericalError("combined precision is not SPD");
  FusionResult out;
  out.cov = lp.solve(eye);
  out.mean = out.cov * (l1.solve(mu1) + l2.solve(mu2));
  return out;
}

}  // namespace mtlf
