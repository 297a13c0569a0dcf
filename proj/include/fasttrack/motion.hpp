#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "fasttrack/geometry.hpp"

namespace fasttrack {

using Vector8d = Eigen::Matrix<double, 8, 1>;
using Matrix8d = Eigen::Matrix<double, 8, 8>;

/// Per-class motion parameters of the constant-velocity filter and the
/// occlusion-time state operators.
struct ClassMotionProfile {
  int class_id = 0;
  double process_noise_pos = 1.0;   // std, pixels
  double process_noise_vel = 0.5;   // std, pixels/frame
  double measurement_noise = 1.0;   // std, pixels
  double gamma_velo = 0.9;          // velocity damping, (0, 1)
  int delta_reset = 3;              // rewind horizon, frames
  double beta_enlarge = 1.1;        // box enlargement factor, >= 1

  bool valid() const {
    return gamma_velo > 0.0 && gamma_velo < 1.0 && beta_enlarge >= 1.0 &&
           delta_reset >= 0 && process_noise_pos > 0.0 &&
           process_noise_vel > 0.0 && measurement_noise > 0.0;
  }
};

/// 8-state constant-velocity filter state:
/// [p_x, p_y, w, h, v_x, v_y, v_w, v_h], covariance 8x8 symmetric PSD.
struct KalmanState {
  Vector8d mean = Vector8d::Zero();
  Matrix8d covariance = Matrix8d::Identity();

  double px() const { return mean(0); }
  double py() const { return mean(1); }
  double w() const { return mean(2); }
  double h() const { return mean(3); }
  double vx() const { return mean(4); }
  double vy() const { return mean(5); }

  Point center() const { return {mean(0), mean(1)}; }
  void set_center(const Point& c) { mean(0) = c.x(); mean(1) = c.y(); }
  Box box() const { return Box::from_center(center(), mean(2), mean(3)); }

  static KalmanState from_box(const Box& z, const ClassMotionProfile& profile);
};

/// One constant-velocity prediction step; extents floor-clamped to 1 px.
KalmanState predict(const KalmanState& s, const ClassMotionProfile& profile);

/// Standard Kalman correction on the (cx, cy, w, h) measurement.
/// Throws std::runtime_error on an ill-conditioned innovation covariance.
KalmanState update(const KalmanState& s, const Box& z, const ClassMotionProfile& profile);

/// Occlusion-entry operator: v <- gamma_velo * v, then the position is
/// rewound delta_reset frames of pre-damping motion, p <- p - delta_reset * v_pre.
KalmanState dampen_velocity(const KalmanState& s, const ClassMotionProfile& profile);

/// Occlusion-entry operator: (w, h) <- beta_enlarge * (w, h), center preserved.
KalmanState enlarge_box(const KalmanState& s, const ClassMotionProfile& profile);

/// Instantaneous motion direction from an N-frame displacement of the
/// tracked center: atan2(dy, dx) of p_k - p_{k-N}. The reference entry is the
/// one at frame k - N, or the nearest earlier one. Returns nothing when the
/// history is too short or the displacement is zero.
std::optional<double> motion_direction(
    const std::vector<std::pair<int, Point>>& history, int window);

/// Exponential moving average: alpha * prev + (1 - alpha) * next.
double ema(double prev, double next, double alpha);

}  // namespace fasttrack
