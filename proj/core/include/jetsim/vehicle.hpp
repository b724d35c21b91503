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

#ifndef JETSIM_VEHICLE_HPP
#define JETSIM_VEHICLE_HPP

#include <array>

#include <Eigen/Dense>

#include "jetsim/control.hpp"
#include "jetsim/lti.hpp"
#include "jetsim/models.hpp"

// Six-jet thrust-vectoring vehicle model.
//
// Frames: body x forward, y right, z down; inertial z down, gravity +z.
// Engines 2, 3, 6 form the left group (offset -Ly) tilted together by
// alpha_1; engines 1, 4, 5 the right group (+Ly) tilted by alpha_2. A
// tilt angle a rotates the thrust direction from straight up to
// [sin a, 0, -cos a]: positive tilt pushes the vehicle forward and pitches
// it nose-up through the Lz moment arm. Pitch uses a common tilt, yaw a
// differential tilt, roll differential thrust between the groups.

namespace jetsim::veh {

inline constexpr double kGravity = 9.80665;  // m/s^2
inline constexpr int kEngineCount = 6;

/// True for engines in the left group {2, 3, 6} (1-based engine ids).
bool is_left_engine(int engine_id);

struct HexJetGeometry {
  double lx = 0.12;  // m, fore/aft engine offset
  double ly = 0.15;  // m, lateral group offset
  double lz = 0.05;  // m, vertical offset below the center of gravity
  double mass = 5.525;                         // kg
  Eigen::Matrix3d inertia =                    // kg m^2
      Eigen::Vector3d(0.1048, 0.1048, 0.1473).asDiagonal();
  double max_engine_thrust = 12.0 * kGravity / 6.0;  // N per engine
  double tilt_limit = 0.5236;                        // rad (30 deg)

  void validate() const;
  /// Engine position in the body frame (1-based id).
  Eigen::Vector3d engine_position(int engine_id) const;
};

/// Instantaneous actuator configuration: per-engine thrusts plus the two
/// group tilt angles. Engines within a group always share one tilt.
struct ActuatorBank {
  std::array<double, kEngineCount> thrust_n{};  // indexed by engine id - 1
  double tilt_left = 0.0;   // alpha_1, engines 2, 3, 6, rad
  double tilt_right = 0.0;  // alpha_2, engines 1, 4, 5, rad

  double tilt_of(int engine_id) const;
  /// Mean thrust of the left / right group.
  double mean_left() const;
  double mean_right() const;
};

struct VehicleState {
  ctl::Quaternion attitude;                            // body -> inertial
  Eigen::Vector3d body_rate = Eigen::Vector3d::Zero();  // rad/s
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();   // m/s, inertial
  Eigen::Vector3d position = Eigen::Vector3d::Zero();   // m, inertial

  void validate() const;
};

/// Thrust direction in the body frame at the given tilt angle.
Eigen::Vector3d thrust_direction(double tilt);

/// Total thrust force in the body frame, summed engine by engine.
Eigen::Vector3d body_force(const ActuatorBank& bank,
                           const HexJetGeometry& geom);
/// Total torque about the center of gravity, sum of L_i x F_i.
Eigen::Vector3d body_torque(const ActuatorBank& bank,
                            const HexJetGeometry& geom);

/// Closed-form force/torque using per-group mean thrusts. Equals the
/// engine-by-engine sums whenever thrust is uniform within each group.
Eigen::Vector3d body_force_closed_form(double f_left, double f_right,
                                       double tilt_left, double tilt_right);
Eigen::Vector3d body_torque_closed_form(const HexJetGeometry& geom,
                                        double f_left, double f_right,
                                        double tilt_left, double tilt_right);

struct AllocationRequest {
  double thrust_up = 0.0;  // N, magnitude of the desired upward thrust
  Eigen::Vector3d torque = Eigen::Vector3d::Zero();  // N m, body frame
};

struct AllocationResult {
  double throttle_left = 0.0;   // commanded throttle per left engine, [0, 1]
  double throttle_right = 0.0;
  double tilt_left = 0.0;       // rad
  double tilt_right = 0.0;
  bool saturated = false;
};

/// Small-angle inversion of the force/torque map: pitch torque -> common
/// tilt, yaw torque -> differential tilt, roll torque -> thrust
/// differential, total thrust -> mean throttle. Two fixed-point passes
/// refine the tilt/thrust coupling; unreachable requests are clamped and
/// flagged.
AllocationResult allocate(const AllocationRequest& request,
                          const HexJetGeometry& geom);

/// Forward map of an allocation result through the static thrust map,
/// ignoring actuator dynamics. Used for round-trip checks.
ActuatorBank to_actuator_bank(const AllocationResult& cmd,
                              const HexJetGeometry& geom);

/// One RK4 step of the rigid-body equations of motion with the given
/// body-frame force and torque held constant. dt must lie in (0, 0.01].
/// The quaternion is renormalized after the step. Throws
/// std::runtime_error if the derivative turns non-finite.
VehicleState step_dynamics(const VehicleState& state,
                           const HexJetGeometry& geom,
                           const Eigen::Vector3d& force_b,
                           const Eigen::Vector3d& torque_b, double dt);

struct ActuatorDynamicsConfig {
  /// Thrust-response lag applied per engine (unity DC gain; the static
  /// thrust map carries the gain). Defaults to the turbojet model.
  lti::DelayedTransferFunction thrust_lag = models::turbojet_thrust_normalized();
  double servo_time_constant = 0.02;  // s (assumed, not identified)
  double servo_rate_limit = 5.236;    // rad/s (300 deg/s, assumed)
};

/// Full nonlinear six-jet plant: static thrust map, per-engine thrust
/// lag with transport delay, servo lag with rate limiting, rigid-body
/// integration. Stepped at the flight-controller rate by one owner.
class HexJetModel {
 public:
  HexJetModel(HexJetGeometry geom, ActuatorDynamicsConfig actuators,
              double dt, double payload_fraction = 0.0);

  /// Applies throttle/tilt commands and advances one sample.
  const VehicleState& step(const AllocationResult& command);

  const VehicleState& state() const { return state_; }
  const ActuatorBank& actuators() const { return bank_; }
  const HexJetGeometry& geometry() const { return geom_; }
  double dt() const { return dt_; }

  /// Exact discrete model of the roll-rate channel at hover trim:
  /// differential-throttle command u in [-1, 1] -> roll rate, including
  /// the thrust lag and its transport delay. This is the nominal model a
  /// Smith predictor uses for the roll loop.
  lti::DelayedTransferFunction roll_rate_model(
      double differential_throttle_limit) const;

 private:
  HexJetGeometry geom_;
  ActuatorDynamicsConfig actuator_cfg_;
  double dt_;
  std::vector<lti::TfSimulator> engine_lag_;
  ActuatorBank bank_;
  VehicleState state_;
};

}  // namespace jetsim::veh

#endif  // JETSIM_VEHICLE_HPP
