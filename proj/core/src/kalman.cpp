#include "sras/kalman.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "sras/error.hpp"

namespace sras {

namespace {

constexpr double kSingularDet = 1e-12;

StateCovariance symmetrized(const StateCovariance& p) { return 0.5 * (p + p.transpose()); }

}  // namespace

const Eigen::Matrix<double, 8, 8>& KalmanFilter::transition() {
  static const Eigen::Matrix<double, 8, 8> f = [] {
    Eigen::Matrix<double, 8, 8> m = Eigen::Matrix<double, 8, 8>::Identity();
    for (int i = 0; i < 4; ++i) m(i, i + 4) = 1.0;
    return m;
  }();
  return f;
}

const Eigen::Matrix<double, 4, 8>& KalmanFilter::observation() {
  static const Eigen::Matrix<double, 4, 8> h = [] {
    Eigen::Matrix<double, 4, 8> m = Eigen::Matrix<double, 4, 8>::Zero();
    m.leftCols<4>().setIdentity();
    return m;
  }();
  return h;
}

KalmanState KalmanFilter::initiate(const Measurement& z) const {
  if (!(z(2) > 0.0) || !(z(3) > 0.0)) {
    throw Error(ErrorCode::NonPositiveSize, "measurement width/height must be positive");
  }
  KalmanState s;
  s.mean << z, Eigen::Vector4d::Zero();

  const double w = z(2), h = z(3);
  const double sp = 2.0 * scales_.position, sv = 10.0 * scales_.velocity;
  StateVector std;
  std << sp * w, sp * h, sp * w, sp * h, sv * w, sv * h, sv * w, sv * h;
  s.covariance = std.array().square().matrix().asDiagonal();
  return s;
}

StateCovariance KalmanFilter::process_noise(const StateVector& mean) const {
  const double w = mean(2), h = mean(3);
  const double sp = scales_.position, sv = scales_.velocity;
  StateVector std;
  std << sp * w, sp * h, sp * w, sp * h, sv * w, sv * h, sv * w, sv * h;
  return std.array().square().matrix().asDiagonal();
}

Eigen::Matrix4d KalmanFilter::measurement_noise(const StateVector& mean) const {
  const double w = mean(2), h = mean(3);
  const double sp = scales_.position;
  Eigen::Vector4d std(sp * w, sp * h, sp * w, sp * h);
  return std.array().square().matrix().asDiagonal();
}

KalmanState KalmanFilter::predict(const KalmanState& s) const {
  const auto& f = transition();
  KalmanState out;
  out.mean = f * s.mean;
  out.covariance = symmetrized(f * s.covariance * f.transpose() + process_noise(s.mean));
  return out;
}

KalmanState KalmanFilter::update(const KalmanState& s, const Measurement& z) const {
  const auto& h = observation();
  const Eigen::Matrix4d innovation_cov = h * s.covariance * h.transpose() + measurement_noise(s.mean);
  Eigen::LLT<Eigen::Matrix4d> llt(innovation_cov);
  if (llt.info() != Eigen::Success || !innovation_cov.allFinite()) {
    throw Error(ErrorCode::SingularInnovation, "innovation covariance is not positive definite");
  }
  // K = P H^T S^-1, computed as (S^-1 H P)^T since S is symmetric.
  const Eigen::Matrix<double, 8, 4> gain = llt.solve(h * s.covariance).transpose();
  const Eigen::Vector4d residual = z - h * s.mean;

  KalmanState out;
  out.mean = s.mean + gain * residual;
  out.covariance = symmetrized((StateCovariance::Identity() - gain * h) * s.covariance);
  return out;
}

StateCovariance cmc_block(const AffineTransform& t) {
  const double scale = std::sqrt(std::abs(t.linear.determinant()));
  StateCovariance m = StateCovariance::Zero();
  m.block<2, 2>(0, 0) = t.linear;
  m(2, 2) = scale;
  m(3, 3) = scale;
  m.block<2, 2>(4, 4) = t.linear;
  m(6, 6) = scale;
  m(7, 7) = scale;
  return m;
}

KalmanState apply_cmc(const KalmanState& s, const AffineTransform& t) {
  if (!(std::abs(t.linear.determinant()) > kSingularDet)) {
    throw Error(ErrorCode::SingularTransform, "camera-motion transform is not invertible");
  }
  const StateCovariance m = cmc_block(t);
  KalmanState out;
  out.mean = m * s.mean;
  out.mean.head<2>() += t.translation;
  out.covariance = symmetrized(m * s.covariance * m.transpose());
  return out;
}

}  // namespace sras
