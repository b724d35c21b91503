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

#include "jetsim/vehicle.hpp"

#include <cmath>
#include <stdexcept>

namespace jetsim::veh {
namespace {

Eigen::Vector4d quat_derivative(const Eigen::Vector4d& q,
                                const Eigen::Vector3d& omega) {
  // 0.5 * q (x) [0, omega]
  const double w = q(0), x = q(1), y = q(2), z = q(3);
  return 0.5 * Eigen::Vector4d(
                   -x * omega.x() - y * omega.y() - z * omega.z(),
                   w * omega.x() + y * omega.z() - z * omega.y(),
                   w * omega.y() - x * omega.z() + z * omega.x(),
                   w * omega.z() + x * omega.y() - y * omega.x());
}

struct StateVec {
  Eigen::Vector4d q;
  Eigen::Vector3d omega, vel, pos;

  StateVec operator+(const StateVec& r) const {
    return {q + r.q, omega + r.omega, vel + r.vel, pos + r.pos};
  }
  StateVec scaled(double s) const {
    return {q * s, omega * s, vel * s, pos * s};
  }
};

}  // namespace

bool is_left_engine(int engine_id) {
  return engine_id == 2 || engine_id == 3 || engine_id == 6;
}

void HexJetGeometry::validate() const {
  if (!(lx > 0.0 && ly > 0.0 && lz > 0.0))
    throw std::invalid_argument("geometry: engine offsets must be > 0");
  if (!(mass > 0.0)) throw std::invalid_argument("geometry: mass must be > 0");
  if ((inertia - inertia.transpose()).norm() > 1e-9 * inertia.norm())
    throw std::invalid_argument("geometry: inertia must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(inertia);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("geometry: inertia must be positive definite");
  if (kEngineCount * max_engine_thrust < mass * kGravity)
    throw std::invalid_argument("geometry: hover infeasible (thrust < weight)");
  if (!(tilt_limit > 0.0 && tilt_limit < 1.5707963267948966))
    throw std::invalid_argument("geometry: tilt limit outside (0, pi/2)");
}

Eigen::Vector3d HexJetGeometry::engine_position(int engine_id) const {
  switch (engine_id) {
    case 1: return {lx, ly, lz};
    case 2: return {-lx, -ly, lz};
    case 3: return {lx, -ly, lz};
    case 4: return {-lx, ly, lz};
    case 5: return {0.0, ly, lz};
    case 6: return {0.0, -ly, lz};
    default: throw std::invalid_argument("engine id must be 1..6");
  }
}

double ActuatorBank::tilt_of(int engine_id) const {
  return is_left_engine(engine_id) ? tilt_left : tilt_right;
}

double ActuatorBank::mean_left() const {
  return (thrust_n[1] + thrust_n[2] + thrust_n[5]) / 3.0;
}

double ActuatorBank::mean_right() const {
  return (thrust_n[0] + thrust_n[3] + thrust_n[4]) / 3.0;
}

void VehicleState::validate() const {
  if (std::abs(attitude.norm() - 1.0) > 1e-6)
    throw std::invalid_argument("vehicle state: attitude not unit norm");
  if (!body_rate.allFinite() || !velocity.allFinite() || !position.allFinite())
    throw std::invalid_argument("vehicle state: non-finite component");
}

Eigen::Vector3d thrust_direction(double tilt) {
  return {std::sin(tilt), 0.0, -std::cos(tilt)};
}

Eigen::Vector3d body_force(const ActuatorBank& bank,
                           const HexJetGeometry& geom) {
  if (std::abs(bank.tilt_left) > geom.tilt_limit + 1e-12 ||
      std::abs(bank.tilt_right) > geom.tilt_limit + 1e-12)
    throw std::invalid_argument("body_force: tilt beyond servo limits");
  Eigen::Vector3d f = Eigen::Vector3d::Zero();
  for (int id = 1; id <= kEngineCount; ++id)
    f += bank.thrust_n[static_cast<std::size_t>(id - 1)] *
         thrust_direction(bank.tilt_of(id));
  return f;
}

Eigen::Vector3d body_torque(const ActuatorBank& bank,
                            const HexJetGeometry& geom) {
  if (std::abs(bank.tilt_left) > geom.tilt_limit + 1e-12 ||
      std::abs(bank.tilt_right) > geom.tilt_limit + 1e-12)
    throw std::invalid_argument("body_torque: tilt beyond servo limits");
  Eigen::Vector3d m = Eigen::Vector3d::Zero();
  for (int id = 1; id <= kEngineCount; ++id) {
    const Eigen::Vector3d f = bank.thrust_n[static_cast<std::size_t>(id - 1)] *
                              thrust_direction(bank.tilt_of(id));
    m += geom.engine_position(id).cross(f);
  }
  return m;
}

Eigen::Vector3d body_force_closed_form(double f_left, double f_right,
                                       double tilt_left, double tilt_right) {
  const double s1 = std::sin(tilt_left), s2 = std::sin(tilt_right);
  const double c1 = std::cos(tilt_left), c2 = std::cos(tilt_right);
  return {3.0 * (f_left * s1 + f_right * s2), 0.0,
          -3.0 * (f_left * c1 + f_right * c2)};
}

Eigen::Vector3d body_torque_closed_form(const HexJetGeometry& geom,
                                        double f_left, double f_right,
                                        double tilt_left, double tilt_right) {
  const double s1 = std::sin(tilt_left), s2 = std::sin(tilt_right);
  const double c1 = std::cos(tilt_left), c2 = std::cos(tilt_right);
  return {3.0 * geom.ly * (f_left * c1 - f_right * c2),
          3.0 * geom.lz * (f_left * s1 + f_right * s2),
          3.0 * geom.ly * (f_left * s1 - f_right * s2)};
}

AllocationResult allocate(const AllocationRequest& request,
                          const HexJetGeometry& geom) {
  AllocationResult out;
  const double f_max = geom.max_engine_thrust;
  if (request.thrust_up <= 1e-9) {
    out.saturated = request.torque.norm() > 1e-12 || request.thrust_up < 0.0;
    return out;
  }

  const double s_lim = std::sin(geom.tilt_limit);
  double f_mean = request.thrust_up / 6.0;
  double half_diff = 0.0;  // (F_L - F_R)/2
  double s1 = 0.0, s2 = 0.0;
  double c1 = 1.0, c2 = 1.0;

  // With the trig values frozen per pass the map is linear:
  //   [T/3, Mx/(3Ly)]  = [[c1+c2, c1-c2], [c1-c2, c1+c2]] [f_mean, h]
  //   [My/(3Lz), Mz/(3Ly)] = [[f_mean, h], [h, f_mean]] [s1+s2, s1-s2]
  // Refreshing the cosines each pass converges fast for small tilt.
  for (int pass = 0; pass < 4; ++pass) {
    const double cs = c1 + c2, cd = c1 - c2;
    const double det_f = cs * cs - cd * cd;
    f_mean = (cs * request.thrust_up / 3.0 -
              cd * request.torque.x() / (3.0 * geom.ly)) / det_f;
    half_diff = (cs * request.torque.x() / (3.0 * geom.ly) -
                 cd * request.thrust_up / 3.0) / det_f;
    const double det_s = f_mean * f_mean - half_diff * half_diff;
    if (std::abs(det_s) < 1e-12) break;
    const double s_sum = (f_mean * request.torque.y() / (3.0 * geom.lz) -
                          half_diff * request.torque.z() / (3.0 * geom.ly)) /
                         det_s;
    const double s_diff = (f_mean * request.torque.z() / (3.0 * geom.ly) -
                           half_diff * request.torque.y() / (3.0 * geom.lz)) /
                          det_s;
    s1 = 0.5 * (s_sum + s_diff);
    s2 = 0.5 * (s_sum - s_diff);
    if (std::abs(s1) > s_lim || std::abs(s2) > s_lim) {
      out.saturated = true;
      s1 = std::clamp(s1, -s_lim, s_lim);
      s2 = std::clamp(s2, -s_lim, s_lim);
    }
    c1 = std::sqrt(1.0 - s1 * s1);
    c2 = std::sqrt(1.0 - s2 * s2);
  }

  double f_left = f_mean + half_diff;
  double f_right = f_mean - half_diff;
  if (f_left < 0.0 || f_left > f_max || f_right < 0.0 || f_right > f_max) {
    out.saturated = true;
    f_left = std::clamp(f_left, 0.0, f_max);
    f_right = std::clamp(f_right, 0.0, f_max);
  }
  out.throttle_left = f_left / f_max;
  out.throttle_right = f_right / f_max;
  out.tilt_left = std::asin(s1);
  out.tilt_right = std::asin(s2);
  return out;
}

ActuatorBank to_actuator_bank(const AllocationResult& cmd,
                              const HexJetGeometry& geom) {
  ActuatorBank bank;
  bank.tilt_left = cmd.tilt_left;
  bank.tilt_right = cmd.tilt_right;
  for (int id = 1; id <= kEngineCount; ++id)
    bank.thrust_n[static_cast<std::size_t>(id - 1)] =
        (is_left_engine(id) ? cmd.throttle_left : cmd.throttle_right) *
        geom.max_engine_thrust;
  return bank;
}

VehicleState step_dynamics(const VehicleState& state,
                           const HexJetGeometry& geom,
                           const Eigen::Vector3d& force_b,
                           const Eigen::Vector3d& torque_b, double dt) {
  if (!(dt > 0.0 && dt <= 0.01))
    throw std::invalid_argument("step_dynamics: dt outside (0, 0.01]");
  state.validate();

  const Eigen::Matrix3d j_inv = geom.inertia.inverse();
  const Eigen::Vector3d gravity(0.0, 0.0, kGravity);

  const auto deriv = [&](const StateVec& s) -> StateVec {
    const double qn = s.q.norm();
    if (!(qn > 0.0) || !s.q.allFinite() || !s.omega.allFinite())
      throw std::runtime_error(
          "step_dynamics: non-finite derivative, simulation aborted");
    const ctl::Quaternion q{s.q(0) / qn, s.q(1) / qn, s.q(2) / qn,
                            s.q(3) / qn};
    StateVec d;
    d.q = quat_derivative(s.q, s.omega);
    d.omega = j_inv * (torque_b - s.omega.cross(geom.inertia * s.omega));
    d.vel = gravity + q.rotation_matrix() * force_b / geom.mass;
    d.pos = s.vel;
    return d;
  };

  const StateVec y0{{state.attitude.w, state.attitude.x, state.attitude.y,
                     state.attitude.z},
                    state.body_rate,
                    state.velocity,
                    state.position};
  const StateVec k1 = deriv(y0);
  const StateVec k2 = deriv(y0 + k1.scaled(0.5 * dt));
  const StateVec k3 = deriv(y0 + k2.scaled(0.5 * dt));
  const StateVec k4 = deriv(y0 + k3.scaled(dt));
  const StateVec y1 =
      y0 + (k1 + k2.scaled(2.0) + k3.scaled(2.0) + k4).scaled(dt / 6.0);

  if (!y1.q.allFinite() || !y1.omega.allFinite() || !y1.vel.allFinite() ||
      !y1.pos.allFinite())
    throw std::runtime_error(
        "step_dynamics: non-finite state, simulation aborted");

  VehicleState next;
  next.attitude =
      ctl::Quaternion{y1.q(0), y1.q(1), y1.q(2), y1.q(3)}.normalized();
  next.body_rate = y1.omega;
  next.velocity = y1.vel;
  next.position = y1.pos;
  return next;
}

HexJetModel::HexJetModel(HexJetGeometry geom, ActuatorDynamicsConfig actuators,
                         double dt, double payload_fraction)
    : geom_(std::move(geom)), actuator_cfg_(std::move(actuators)), dt_(dt) {
  if (payload_fraction < 0.0)
    throw std::invalid_argument("HexJetModel: negative payload fraction");
  geom_.mass *= 1.0 + payload_fraction;
  geom_.inertia *= 1.0 + payload_fraction;
  geom_.validate();
  if (actuator_cfg_.thrust_lag.sample_time() != dt_)
    throw std::invalid_argument("HexJetModel: thrust lag sample-time mismatch");
  engine_lag_.reserve(kEngineCount);
  for (int i = 0; i < kEngineCount; ++i)
    engine_lag_.emplace_back(actuator_cfg_.thrust_lag);
}

const VehicleState& HexJetModel::step(const AllocationResult& command) {
  // Static thrust map, then the per-engine response lag (with delay).
  for (int id = 1; id <= kEngineCount; ++id) {
    const double throttle = std::clamp(
        is_left_engine(id) ? command.throttle_left : command.throttle_right,
        0.0, 1.0);
    bank_.thrust_n[static_cast<std::size_t>(id - 1)] =
        engine_lag_[static_cast<std::size_t>(id - 1)].step(
            throttle * geom_.max_engine_thrust);
  }
  // Servo: first-order lag with rate limiting.
  const auto servo = [&](double current, double cmd) {
    const double target = std::clamp(cmd, -geom_.tilt_limit, geom_.tilt_limit);
    double delta = (dt_ / actuator_cfg_.servo_time_constant) * (target - current);
    const double max_step = actuator_cfg_.servo_rate_limit * dt_;
    delta = std::clamp(delta, -max_step, max_step);
    return current + delta;
  };
  bank_.tilt_left = servo(bank_.tilt_left, command.tilt_left);
  bank_.tilt_right = servo(bank_.tilt_right, command.tilt_right);

  const Eigen::Vector3d f = body_force(bank_, geom_);
  const Eigen::Vector3d m = body_torque(bank_, geom_);
  state_ = step_dynamics(state_, geom_, f, m, dt_);
  return state_;
}

lti::DelayedTransferFunction HexJetModel::roll_rate_model(
    double differential_throttle_limit) const {
  // u in [-1, 1] -> throttle differential -> torque through the thrust
  // lag -> rate through the (exact) discrete integrator dt/(z - 1).
  const double torque_per_u = 6.0 * geom_.ly * geom_.max_engine_thrust *
                              differential_throttle_limit;
  const double k = torque_per_u / geom_.inertia(0, 0);
  const lti::DelayedTransferFunction integrator({k * dt_}, {1.0, -1.0}, 0,
                                                dt_);
  return lti::series(actuator_cfg_.thrust_lag, integrator);
}

}  // namespace jetsim::veh
