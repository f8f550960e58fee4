#pragma once

#include <Eigen/Core>

namespace sras {

struct LinearModel {
  Eigen::VectorXd weights;
  double intercept = 0.0;

  double predict(const Eigen::VectorXd& x) const { return weights.dot(x) + intercept; }
  /// One prediction per row.
  Eigen::VectorXd predict_rows(const Eigen::MatrixXd& x) const;
};

/// Ordinary least squares with intercept, solved through the normal
/// equations with 1e-8 added to the diagonal. Throws SingularSystem when the
/// system has fewer rows than columns + 1, contains non-finite values, or is
/// rank deficient beyond the jitter.
LinearModel fit_linear(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets);

inline constexpr double kRidgeJitter = 1e-8;

}  // namespace sras
