#include "fasttrack/motion.hpp"

#include <cmath>
#include <stdexcept>

namespace fasttrack {

namespace {

using Matrix48d = Eigen::Matrix<double, 4, 8>;
using Matrix4d = Eigen::Matrix4d;

Matrix8d transition_matrix() {
  Matrix8d f = Matrix8d::Identity();
  for (int i = 0; i < 4; ++i) f(i, i + 4) = 1.0;
  return f;
}

Matrix8d process_noise(const ClassMotionProfile& p) {
  Vector8d q;
  const double sp = p.process_noise_pos * p.process_noise_pos;
  const double sv = p.process_noise_vel * p.process_noise_vel;
  q << sp, sp, sp, sp, sv, sv, sv, sv;
  return q.asDiagonal();
}

Matrix48d measurement_matrix() {
  Matrix48d h = Matrix48d::Zero();
  for (int i = 0; i < 4; ++i) h(i, i) = 1.0;
  return h;
}

void clamp_extents(Vector8d& mean) {
  mean(2) = std::max(mean(2), 1.0);
  mean(3) = std::max(mean(3), 1.0);
}

}  // namespace

KalmanState KalmanState::from_box(const Box& z, const ClassMotionProfile& profile) {
  KalmanState s;
  const Point c = z.center();
  s.mean << c.x(), c.y(), z.width, z.height, 0.0, 0.0, 0.0, 0.0;
  const double mp = 2.0 * profile.measurement_noise;
  const double mv = 10.0 * profile.process_noise_vel;
  Vector8d d;
  d << mp * mp, mp * mp, mp * mp, mp * mp, mv * mv, mv * mv, mv * mv, mv * mv;
  s.covariance = d.asDiagonal();
  return s;
}

KalmanState predict(const KalmanState& s, const ClassMotionProfile& profile) {
  static const Matrix8d f = transition_matrix();
  KalmanState out;
  out.mean = f * s.mean;
  clamp_extents(out.mean);
  out.covariance = f * s.covariance * f.transpose() + process_noise(profile);
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose().eval());
  return out;
}

KalmanState update(const KalmanState& s, const Box& z, const ClassMotionProfile& profile) {
  static const Matrix48d h = measurement_matrix();
  const double r = profile.measurement_noise * profile.measurement_noise;
  const Matrix4d innov_cov =
      h * s.covariance * h.transpose() + r * Matrix4d::Identity();

  Eigen::LDLT<Matrix4d> ldlt(innov_cov);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 1e-12)
    throw std::runtime_error("kalman update: ill-conditioned innovation covariance");

  const Point c = z.center();
  Eigen::Vector4d meas;
  meas << c.x(), c.y(), z.width, z.height;
  const Eigen::Vector4d innovation = meas - h * s.mean;

  const Eigen::Matrix<double, 8, 4> gain =
      s.covariance * h.transpose() * ldlt.solve(Matrix4d::Identity());

  KalmanState out;
  out.mean = s.mean + gain * innovation;
  clamp_extents(out.mean);
  // Joseph form keeps the covariance symmetric PSD
  const Matrix8d ikh = Matrix8d::Identity() - gain * h;
  out.covariance = ikh * s.covariance * ikh.transpose() +
                   gain * (r * Matrix4d::Identity()) * gain.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose().eval());
  return out;
}

KalmanState dampen_velocity(const KalmanState& s, const ClassMotionProfile& profile) {
  KalmanState out = s;
  const double vx_pre = s.mean(4);
  const double vy_pre = s.mean(5);
  out.mean(4) = profile.gamma_velo * vx_pre;
  out.mean(5) = profile.gamma_velo * vy_pre;
  out.mean(0) -= profile.delta_reset * vx_pre;
  out.mean(1) -= profile.delta_reset * vy_pre;
  return out;
}

KalmanState enlarge_box(const KalmanState& s, const ClassMotionProfile& profile) {
  KalmanState out = s;
  out.mean(2) *= profile.beta_enlarge;
  out.mean(3) *= profile.beta_enlarge;
  return out;
}

std::optional<double> motion_direction(
    const std::vector<std::pair<int, Point>>& history, int window) {
  if (history.size() < 2) return std::nullopt;
  const auto& [frame_k, p_k] = history.back();
  const int target = frame_k - window;
  // nearest entry at or before frame k - N
  const std::pair<int, Point>* ref = nullptr;
  for (const auto& entry : history) {
    if (entry.first > target) break;
    ref = &entry;
  }
  if (ref == nullptr) return std::nullopt;
  const Point d = p_k - ref->second;
  if (d.norm() == 0.0) return std::nullopt;
  return std::atan2(d.y(), d.x());
}

double ema(double prev, double next, double alpha) {
  return alpha * prev + (1.0 - alpha) * next;
}

}  // namespace fasttrack
