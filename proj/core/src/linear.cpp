#include "sras/linear.hpp"

#include <Eigen/Cholesky>

#include "sras/error.hpp"

namespace sras {

Eigen::VectorXd LinearModel::predict_rows(const Eigen::MatrixXd& x) const {
  return (x * weights).array() + intercept;
}

LinearModel fit_linear(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets) {
  const Eigen::Index n = features.rows();
  const Eigen::Index k = features.cols();
  if (targets.size() != n) throw Error(ErrorCode::ShapeMismatch, "targets length differs from feature rows");
  if (n < k + 1) throw Error(ErrorCode::SingularSystem, "need at least columns + 1 rows");
  if (!features.allFinite() || !targets.allFinite()) throw Error(ErrorCode::SingularSystem, "non-finite input");

  Eigen::MatrixXd design(n, k + 1);
  design.leftCols(k) = features;
  design.col(k).setOnes();

  Eigen::MatrixXd normal = design.transpose() * design;
  normal.diagonal().array() += kRidgeJitter;
  const Eigen::VectorXd rhs = design.transpose() * targets;

  Eigen::LLT<Eigen::MatrixXd> llt(normal);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "normal equations are not positive definite");
  const Eigen::VectorXd solution = llt.solve(rhs);
  if (!solution.allFinite()) throw Error(ErrorCode::SingularSystem, "least-squares solution is not finite");

  LinearModel model;
  model.weights = solution.head(k);
  model.intercept = solution(k);
  return model;
}

}  // namespace sras
