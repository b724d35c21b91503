// Copyright 2026 The jetsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "jetsim/control.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jetsim::ctl {
namespace {
constexpr double kUnitNormTol = 1e-6;

void require_unit(const Quaternion& q, const char* what) {
  if (std::abs(q.norm() - 1.0) > kUnitNormTol)
    throw std::invalid_argument(std::string(what) +
                                ": quaternion is not unit norm");
}
}  // namespace

Quaternion Quaternion::from_axis_angle(const Eigen::Vector3d& axis,
                                       double angle) {
  const double n = axis.norm();
  if (n == 0.0) return identity();
  const Eigen::Vector3d u = axis / n;
  const double h = 0.5 * angle;
  const double s = std::sin(h);
  return Quaternion{std::cos(h), s * u.x(), s * u.y(), s * u.z()}.normalized();
}

Quaternion Quaternion::from_euler(double roll, double pitch, double yaw) {
  return (from_axis_angle({0, 0, 1}, yaw) * from_axis_angle({0, 1, 0}, pitch) *
          from_axis_angle({1, 0, 0}, roll))
      .normalized();
}

double Quaternion::norm() const {
  return std::sqrt(w * w + x * x + y * y + z * z);
}

Quaternion Quaternion::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::invalid_argument("cannot normalize zero quaternion");
  return {w / n, x / n, y / n, z / n};
}

Quaternion Quaternion::operator*(const Quaternion& r) const {
  return {w * r.w - x * r.x - y * r.y - z * r.z,
          w * r.x + x * r.w + y * r.z - z * r.y,
          w * r.y - x * r.z + y * r.w + z * r.x,
          w * r.z + x * r.y - y * r.x + z * r.w};
}

Eigen::Matrix3d Quaternion::rotation_matrix() const {
  Eigen::Matrix3d m;
  m << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return m;
}

Eigen::Vector3d Quaternion::rotate(const Eigen::Vector3d& v) const {
  return rotation_matrix() * v;
}

Eigen::Vector3d Quaternion::euler_angles() const {
  const double roll = std::atan2(2 * (w * x + y * z), 1 - 2 * (x * x + y * y));
  const double sp = std::clamp(2 * (w * y - z * x), -1.0, 1.0);
  const double pitch = std::asin(sp);
  const double yaw = std::atan2(2 * (w * z + x * y), 1 - 2 * (y * y + z * z));
  return {roll, pitch, yaw};
}

Quaternion Quaternion::integrated(const Eigen::Vector3d& body_rate,
                                  double dt) const {
  const Eigen::Vector3d theta = body_rate * dt;
  return (*this * from_axis_angle(theta, theta.norm())).normalized();
}

void AttitudeGains::validate() const {
  if (!(kp.minCoeff() > 0.0))
    throw std::invalid_argument("attitude gains must be strictly positive");
}

Eigen::Vector3d attitude_step(const AttitudeGains& gains,
                              const Quaternion& setpoint,
                              const Quaternion& current) {
  require_unit(setpoint, "attitude_step setpoint");
  require_unit(current, "attitude_step current");
  Quaternion qe = current.conjugate() * setpoint;
  if (qe.w < 0.0) qe = -qe;  // shortest rotation
  return 2.0 * gains.kp.cwiseProduct(qe.vec());
}

void RatePidGains::validate() const {
  if (!(kp > 0.0)) throw std::invalid_argument("rate PID: Kp must be > 0");
  if (ki < 0.0 || kd < 0.0)
    throw std::invalid_argument("rate PID: Ki, Kd must be >= 0");
  if (!(integrator_limit > 0.0) || !(output_limit > 0.0))
    throw std::invalid_argument("rate PID: limits must be > 0");
  if (!(derivative_cutoff_hz > 0.0))
    throw std::invalid_argument("rate PID: derivative cutoff must be > 0");
}

RatePid::RatePid(RatePidGains gains, double dt) : gains_(gains), dt_(dt) {
  gains_.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("rate PID: dt must be > 0");
  const double rc =
      1.0 / (2.0 * std::numbers::pi * gains_.derivative_cutoff_hz);
  filter_alpha_ = dt / (dt + rc);
}

double RatePid::step(double setpoint, double measurement) {
  if (!std::isfinite(setpoint) || !std::isfinite(measurement))
    throw std::invalid_argument("RatePid::step: non-finite input");
  const double error = setpoint - measurement;

  double prev_filtered = filtered_meas_;
  if (first_sample_) {
    prev_filtered = measurement;
    filtered_meas_ = measurement;
    first_sample_ = false;
  }
  filtered_meas_ += filter_alpha_ * (measurement - filtered_meas_);
  const double d_term = -gains_.kd * (filtered_meas_ - prev_filtered) / dt_;

  const double p_term = gains_.kp * error;
  const double di = gains_.ki * error * dt_;
  const double unsat = p_term + integrator_ + d_term;
  const bool saturated = std::abs(unsat) > gains_.output_limit;
  const double candidate = std::clamp(integrator_ + di,
                                      -gains_.integrator_limit,
                                      gains_.integrator_limit);
  if (!saturated || std::abs(candidate) <= std::abs(integrator_))
    integrator_ = candidate;

  return std::clamp(p_term + integrator_ + d_term, -gains_.output_limit,
                    gains_.output_limit);
}

void RatePid::reset() {
  integrator_ = 0.0;
  filtered_meas_ = 0.0;
  first_sample_ = true;
}

CascadeController::CascadeController(AttitudeGains att,
                                     std::array<RatePidGains, 3> rate,
                                     double dt)
    : att_(att), dt_(dt) {
  att_.validate();
  for (int i = 0; i < 3; ++i)
    pids_[static_cast<std::size_t>(i)].emplace(rate[static_cast<std::size_t>(i)], dt);
}

void CascadeController::attach_smith(pred::SmithPredictor smith) {
  if (smith.nominal().sample_time() != dt_)
    throw std::invalid_argument(
        "attach_smith: predictor/plant sample-time mismatch");
  smith_ = std::move(smith);
  choice_ = PredictorChoice::kSmith;
}

void CascadeController::attach_state(pred::StatePredictor predictor,
                                     pred::LuenbergerObserver observer) {
  if (observer.sample_time() != dt_)
    throw std::invalid_argument(
        "attach_state: observer/plant sample-time mismatch");
  state_pred_ = std::move(predictor);
  observer_ = std::move(observer);
  choice_ = PredictorChoice::kState;
}

double CascadeController::roll_feedback(double measured_rate) {
  switch (choice_) {
    case PredictorChoice::kNone:
      return measured_rate;
    case PredictorChoice::kSmith:
      return smith_->predict(last_u_.x(), measured_rate);
    case PredictorChoice::kState: {
      const Eigen::Vector2d x_hat =
          observer_->step(last_u_.x(), measured_rate);
      return state_pred_->predict(x_hat)(0);
    }
  }
  return measured_rate;
}

Eigen::Vector3d CascadeController::step(const Quaternion& setpoint,
                                        const Quaternion& current,
                                        const Eigen::Vector3d& rate_meas) {
  return step_rate(attitude_step(att_, setpoint, current), rate_meas);
}

Eigen::Vector3d CascadeController::step_rate(
    const Eigen::Vector3d& rate_setpoint, const Eigen::Vector3d& rate_meas) {
  last_rate_sp_ = rate_setpoint;
  last_roll_feedback_ = roll_feedback(rate_meas.x());
  Eigen::Vector3d u;
  u.x() = pids_[0]->step(rate_setpoint.x(), last_roll_feedback_);
  u.y() = pids_[1]->step(rate_setpoint.y(), rate_meas.y());
  u.z() = pids_[2]->step(rate_setpoint.z(), rate_meas.z());
  if (choice_ == PredictorChoice::kState) state_pred_->push_input(u.x());
  last_u_ = u;
  return u;
}

void CascadeController::reset() {
  for (auto& pid : pids_) pid->reset();
  if (smith_) smith_->reset();
  if (state_pred_) state_pred_->reset();
  if (observer_) observer_->reset();
  last_u_.setZero();
  last_rate_sp_.setZero();
  last_roll_feedback_ = 0.0;
}

}  // namespace jetsim::ctl
