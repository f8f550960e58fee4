#pragma once

#include <Eigen/Core>

#include "sras/geometry.hpp"

namespace sras {

using StateVector = Eigen::Matrix<double, 8, 1>;
using StateCovariance = Eigen::Matrix<double, 8, 8>;

/// Constant-velocity box state (cx, cy, w, h, vcx, vcy, vw, vh). Width and
/// height are tracked directly rather than through an aspect ratio.
struct KalmanState {
  StateVector mean = StateVector::Zero();
  StateCovariance covariance = StateCovariance::Identity();

  BBox box() const { return from_cxcywh(mean.head<4>()); }
};

/// Global camera motion between consecutive frames: p' = linear * p + translation.
struct AffineTransform {
  Eigen::Matrix2d linear = Eigen::Matrix2d::Identity();
  Eigen::Vector2d translation = Eigen::Vector2d::Zero();

  static AffineTransform identity() { return {}; }
  static AffineTransform translate(double tx, double ty) {
    AffineTransform t;
    t.translation = {tx, ty};
    return t;
  }
};

/// Noise standard deviations are proportional to the current box size:
/// `position` scales the positional terms, `velocity` the rate terms.
struct NoiseScales {
  double position = 1.0 / 20.0;
  double velocity = 1.0 / 160.0;
};

class KalmanFilter {
 public:
  explicit KalmanFilter(NoiseScales scales = {}) : scales_(scales) {}

  const NoiseScales& scales() const { return scales_; }

  /// Zero-velocity state centred on the measurement. Throws NonPositiveSize.
  KalmanState initiate(const Measurement& z) const;

  /// One frame of constant-velocity motion: mean <- F mean, P <- F P F^T + Q.
  KalmanState predict(const KalmanState& s) const;

  /// Correction with H = [I4 | 0]. Throws SingularInnovation.
  KalmanState update(const KalmanState& s, const Measurement& z) const;

  static const Eigen::Matrix<double, 8, 8>& transition();
  static const Eigen::Matrix<double, 4, 8>& observation();

  StateCovariance process_noise(const StateVector& mean) const;
  Eigen::Matrix4d measurement_noise(const StateVector& mean) const;

 private:
  NoiseScales scales_;
};

/// The 8x8 block map induced by `t` on the state: the linear part acts on
/// position and velocity of the centre, sqrt|det| rescales size and size rate.
StateCovariance cmc_block(const AffineTransform& t);

/// Warps a state into the current camera frame. Throws SingularTransform when
/// |det(linear)| <= 1e-12.
KalmanState apply_cmc(const KalmanState& s, const AffineTransform& t);

}  // namespace sras
