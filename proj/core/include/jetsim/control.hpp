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

#ifndef JETSIM_CONTROL_HPP
#define JETSIM_CONTROL_HPP

#include <array>
#include <memory>
#include <optional>

#include <Eigen/Dense>

#include "jetsim/predictor.hpp"

namespace jetsim::ctl {

/// Unit quaternion (w, x, y, z). Operations renormalize so the norm stays
/// within 1e-9 of one.
struct Quaternion {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  static Quaternion identity() { return {}; }
  static Quaternion from_axis_angle(const Eigen::Vector3d& axis, double angle);
  /// ZYX convention (yaw about z, then pitch, then roll).
  static Quaternion from_euler(double roll, double pitch, double yaw);

  double norm() const;
  Quaternion normalized() const;
  Quaternion conjugate() const { return {w, -x, -y, -z}; }
  Quaternion operator*(const Quaternion& r) const;
  Quaternion operator-() const { return {-w, -x, -y, -z}; }

  Eigen::Vector3d vec() const { return {x, y, z}; }
  Eigen::Matrix3d rotation_matrix() const;
  Eigen::Vector3d rotate(const Eigen::Vector3d& v) const;
  /// (roll, pitch, yaw), ZYX convention.
  Eigen::Vector3d euler_angles() const;

  /// Exact integration over dt assuming constant body rate.
  Quaternion integrated(const Eigen::Vector3d& body_rate, double dt) const;
};

/// Per-axis proportional gains of the attitude loop (1/s).
struct AttitudeGains {
  Eigen::Vector3d kp{6.0, 6.0, 3.0};

  void validate() const;
};

/// Quaternion-error proportional attitude law. Returns the body rate
/// setpoint 2*K*sgn(qe_w)*qe_vec with qe = current^-1 * setpoint
/// (shortest rotation; invariant under quaternion sign flips).
Eigen::Vector3d attitude_step(const AttitudeGains& gains,
                              const Quaternion& setpoint,
                              const Quaternion& current);

struct RatePidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double integrator_limit = 1.0;
  double output_limit = 1.0;
  double derivative_cutoff_hz = 30.0;

  void validate() const;
};

/// Rate-loop PID. Parallel form; derivative acts on the low-pass-filtered
/// measurement (no setpoint kick); conditional integration keeps the
/// integrator magnitude non-increasing while the output is saturated.
class RatePid {
 public:
  RatePid(RatePidGains gains, double dt);

  double step(double setpoint, double measurement);
  void reset();
  const RatePidGains& gains() const { return gains_; }
  double integrator() const { return integrator_; }

 private:
  RatePidGains gains_;
  double dt_;
  double filter_alpha_;
  double integrator_ = 0.0;
  double filtered_meas_ = 0.0;
  bool first_sample_ = true;
};

enum class PredictorChoice { kNone, kSmith, kState };

/// Cascade attitude controller: quaternion-P outer loop commanding three
/// rate PIDs. The roll-axis rate feedback can be replaced by a Smith
/// predictor output or by a d-step state prediction fed from a rate
/// observer; pitch/yaw always use the raw measurement.
class CascadeController {
 public:
  CascadeController(AttitudeGains att, std::array<RatePidGains, 3> rate,
                    double dt);

  /// Roll feedback from a Smith predictor. The model's sample time must
  /// match the controller's.
  void attach_smith(pred::SmithPredictor smith);
  /// Roll feedback from a d-step state prediction of `model`, with the
  /// state estimated by `observer`.
  void attach_state(pred::StatePredictor predictor,
                    pred::LuenbergerObserver observer);

  PredictorChoice predictor_choice() const { return choice_; }

  /// Full cascade step: attitude error -> rate setpoints -> torque commands.
  Eigen::Vector3d step(const Quaternion& setpoint, const Quaternion& current,
                       const Eigen::Vector3d& rate_meas);

  /// Rate-loop-only step (attitude loop bypassed).
  Eigen::Vector3d step_rate(const Eigen::Vector3d& rate_setpoint,
                            const Eigen::Vector3d& rate_meas);

  /// Roll feedback used by the last step (prediction when a predictor is
  /// attached, raw measurement otherwise).
  double last_roll_feedback() const { return last_roll_feedback_; }
  const Eigen::Vector3d& last_rate_setpoint() const { return last_rate_sp_; }

  void reset();
  double dt() const { return dt_; }

 private:
  double roll_feedback(double measured_rate);

  AttitudeGains att_;
  std::array<std::optional<RatePid>, 3> pids_;
  double dt_;
  PredictorChoice choice_ = PredictorChoice::kNone;
  std::optional<pred::SmithPredictor> smith_;
  std::optional<pred::StatePredictor> state_pred_;
  std::optional<pred::LuenbergerObserver> observer_;
  Eigen::Vector3d last_u_ = Eigen::Vector3d::Zero();
  Eigen::Vector3d last_rate_sp_ = Eigen::Vector3d::Zero();
  double last_roll_feedback_ = 0.0;
};

}  // namespace jetsim::ctl

#endif  // JETSIM_CONTROL_HPP
