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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "jetsim/vehicle.hpp"

using namespace jetsim;
using veh::ActuatorBank;
using veh::HexJetGeometry;

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;

ActuatorBank uniform_bank(double f_left, double f_right, double tilt_left,
                          double tilt_right) {
  ActuatorBank bank;
  bank.tilt_left = tilt_left;
  bank.tilt_right = tilt_right;
  for (int id = 1; id <= veh::kEngineCount; ++id)
    bank.thrust_n[static_cast<std::size_t>(id - 1)] =
        veh::is_left_engine(id) ? f_left : f_right;
  return bank;
}
}  // namespace

TEST_CASE("body force at rest and at full tilt") {
  HexJetGeometry geom;
  geom.tilt_limit = std::numbers::pi / 2.0 * 0.999;
  const double f = 5.0;

  SUBCASE("zero tilt: all thrust along -z (up)") {
    const auto force = veh::body_force(uniform_bank(f, f, 0, 0), geom);
    CHECK(force.x() == doctest::Approx(0.0));
    CHECK(force.y() == 0.0);
    CHECK(force.z() == doctest::Approx(-6.0 * f).epsilon(1e-12));
  }
  SUBCASE("90 degree tilt: all thrust along +x") {
    const double t = geom.tilt_limit;
    const auto force = veh::body_force(uniform_bank(f, f, t, t), geom);
    CHECK(force.x() == doctest::Approx(6.0 * f * std::sin(t)).epsilon(1e-12));
    CHECK(force.z() == doctest::Approx(-6.0 * f * std::cos(t)).epsilon(1e-12));
  }
  SUBCASE("opposed tilts match the closed form") {
    const auto bank = uniform_bank(f, f, 10.0 * kDeg, -10.0 * kDeg);
    const auto force = veh::body_force(bank, geom);
    const auto closed =
        veh::body_force_closed_form(f, f, 10.0 * kDeg, -10.0 * kDeg);
    CHECK((force - closed).norm() < 1e-12);
    CHECK(force.x() == doctest::Approx(0.0).epsilon(1e-12));  // sin cancels
  }
  SUBCASE("tilt beyond the servo limit is rejected") {
    HexJetGeometry tight;
    CHECK_THROWS_AS(
        veh::body_force(uniform_bank(f, f, 0.6, 0.0), tight),
        std::invalid_argument);
  }
}

TEST_CASE("body torque symmetry cases") {
  HexJetGeometry geom;
  const double f = 8.0;

  SUBCASE("balanced thrust, zero tilt: no torque") {
    const auto torque = veh::body_torque(uniform_bank(f, f, 0, 0), geom);
    CHECK(torque.norm() < 1e-12);
  }
  SUBCASE("common tilt: pure pitch of 6 F Lz sin(a)") {
    const double a = 12.0 * kDeg;
    const auto torque = veh::body_torque(uniform_bank(f, f, a, a), geom);
    CHECK(torque.y() ==
          doctest::Approx(6.0 * f * geom.lz * std::sin(a)).epsilon(1e-12));
    CHECK(std::abs(torque.z()) < 1e-12);
    // Roll from the cos parts cancels for equal thrust.
    CHECK(std::abs(torque.x()) < 1e-12);
  }
  SUBCASE("differential tilt: pure yaw of magnitude 6 F Ly sin(a)") {
    const double a = 9.0 * kDeg;
    const auto torque = veh::body_torque(uniform_bank(f, f, a, -a), geom);
    CHECK(std::abs(torque.y()) < 1e-12);  // pitch cancels exactly
    CHECK(std::abs(torque.x()) < 1e-12);
    CHECK(std::abs(torque.z()) ==
          doctest::Approx(6.0 * f * geom.ly * std::sin(a)).epsilon(1e-12));
  }
  SUBCASE("differential thrust: pure roll of 3 Ly (F_L - F_R)") {
    const auto torque = veh::body_torque(uniform_bank(9.0, 7.0, 0, 0), geom);
    CHECK(torque.x() ==
          doctest::Approx(3.0 * geom.ly * (9.0 - 7.0)).epsilon(1e-12));
    CHECK(std::abs(torque.y()) < 1e-12);
    CHECK(std::abs(torque.z()) < 1e-12);
  }
}

TEST_CASE("closed forms agree with the per-engine vector sums") {
  HexJetGeometry geom;
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> thrust(0.0, geom.max_engine_thrust);
  std::uniform_real_distribution<double> tilt(-geom.tilt_limit,
                                              geom.tilt_limit);
  std::bernoulli_distribution yaw_mode(0.5);
  for (int trial = 0; trial < 10000; ++trial) {
    const double a1 = tilt(rng);
    const double a2 = yaw_mode(rng) ? -a1 : a1;  // group tilt constraint
    const double fl = thrust(rng), fr = thrust(rng);
    const auto bank = uniform_bank(fl, fr, a1, a2);
    CHECK((veh::body_force(bank, geom) -
           veh::body_force_closed_form(fl, fr, a1, a2))
              .lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK((veh::body_torque(bank, geom) -
           veh::body_torque_closed_form(geom, fl, fr, a1, a2))
              .lpNorm<Eigen::Infinity>() < 1e-9);
  }
}

TEST_CASE("allocation") {
  HexJetGeometry geom;
  const double mg = geom.mass * veh::kGravity;

  SUBCASE("hover trim: equal throttles, zero tilt") {
    const auto cmd = veh::allocate({mg, Eigen::Vector3d::Zero()}, geom);
    CHECK_FALSE(cmd.saturated);
    CHECK(cmd.throttle_left == doctest::Approx(cmd.throttle_right));
    CHECK(cmd.tilt_left == 0.0);
    CHECK(cmd.tilt_right == 0.0);
    CHECK(cmd.throttle_left * geom.max_engine_thrust * 6.0 ==
          doctest::Approx(mg).epsilon(1e-9));
  }
  SUBCASE("pure roll torque: thrust differential tau/(3 Ly)") {
    const double tau = 0.8;
    const auto cmd = veh::allocate({mg, {tau, 0, 0}}, geom);
    const double fl = cmd.throttle_left * geom.max_engine_thrust;
    const double fr = cmd.throttle_right * geom.max_engine_thrust;
    CHECK(fl - fr == doctest::Approx(tau / (3.0 * geom.ly)).epsilon(1e-9));
  }
  SUBCASE("pure pitch torque: common tilt asin(tau/(6 F Lz))") {
    const double tau = 0.5;
    const auto cmd = veh::allocate({mg, {0, tau, 0}}, geom);
    CHECK(cmd.tilt_left == doctest::Approx(cmd.tilt_right).epsilon(1e-9));
    const double f = cmd.throttle_left * geom.max_engine_thrust;
    CHECK(std::sin(cmd.tilt_left) ==
          doctest::Approx(tau / (6.0 * f * geom.lz)).epsilon(1e-4));
  }
  SUBCASE("round trip within 2% for tilts under 15 degrees") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> torque(-0.8, 0.8);
    std::uniform_real_distribution<double> roll_torque(-2.0, 2.0);
    for (int trial = 0; trial < 2000; ++trial) {
      veh::AllocationRequest request;
      request.thrust_up = mg;
      request.torque = {roll_torque(rng), torque(rng), torque(rng)};
      const auto cmd = veh::allocate(request, geom);
      if (cmd.saturated) continue;
      if (std::abs(cmd.tilt_left) > 15.0 * kDeg ||
          std::abs(cmd.tilt_right) > 15.0 * kDeg)
        continue;
      const auto bank = veh::to_actuator_bank(cmd, geom);
      const auto force = veh::body_force(bank, geom);
      const auto torque_out = veh::body_torque(bank, geom);
      CHECK(-force.z() == doctest::Approx(mg).epsilon(0.02));
      for (int axis = 0; axis < 3; ++axis) {
        const double want = request.torque(axis);
        const double got = torque_out(axis);
        const double scale = std::max(std::abs(want), 0.05);
        CHECK(std::abs(got - want) / scale < 0.02);
      }
    }
  }
  SUBCASE("unreachable request saturates with a flag") {
    const auto cmd = veh::allocate({mg, {500.0, 0, 0}}, geom);
    CHECK(cmd.saturated);
    CHECK(cmd.throttle_left <= 1.0);
    CHECK(cmd.throttle_right >= 0.0);
  }
  SUBCASE("pitch round trip through body_torque is tight") {
    const double tau = 0.4;
    const auto cmd = veh::allocate({mg, {0, tau, 0}}, geom);
    const auto torque =
        veh::body_torque(veh::to_actuator_bank(cmd, geom), geom);
    CHECK(torque.y() == doctest::Approx(tau).epsilon(1e-6));
  }
}

TEST_CASE("rigid body dynamics") {
  HexJetGeometry geom;
  SUBCASE("zero thrust: free fall at g in +z") {
    veh::VehicleState s;
    const auto next = veh::step_dynamics(s, geom, Eigen::Vector3d::Zero(),
                                         Eigen::Vector3d::Zero(), 0.004);
    CHECK(next.velocity.z() ==
          doctest::Approx(veh::kGravity * 0.004).epsilon(1e-12));
    CHECK(next.velocity.x() == 0.0);
    CHECK(next.body_rate.norm() == 0.0);
  }
  SUBCASE("hover trim is stationary") {
    veh::VehicleState s;
    const Eigen::Vector3d thrust_up(0, 0, -geom.mass * veh::kGravity);
    auto next = s;
    for (int k = 0; k < 250; ++k)
      next = veh::step_dynamics(next, geom, thrust_up,
                                Eigen::Vector3d::Zero(), 0.004);
    CHECK(next.velocity.norm() < 1e-9);
    CHECK(next.position.norm() < 1e-9);
    CHECK(next.body_rate.norm() < 1e-9);
  }
  SUBCASE("torque-free tumble conserves energy and momentum magnitude") {
    // Intermediate-axis tumble; oracle: invariants of the Euler equations.
    HexJetGeometry tri = geom;
    tri.inertia = Eigen::Vector3d(0.08, 0.12, 0.15).asDiagonal();
    veh::VehicleState s;
    s.body_rate = {0.05, 2.0, 0.08};
    const auto energy = [&](const veh::VehicleState& st) {
      return 0.5 * st.body_rate.dot(tri.inertia * st.body_rate);
    };
    const auto momentum = [&](const veh::VehicleState& st) {
      return (tri.inertia * st.body_rate).norm();
    };
    const double e0 = energy(s), l0 = momentum(s);
    for (int k = 0; k < 2500; ++k)  // 10 s at 0.004
      s = veh::step_dynamics(s, tri, Eigen::Vector3d::Zero(),
                             Eigen::Vector3d::Zero(), 0.004);
    CHECK(std::abs(energy(s) - e0) / e0 < 1e-6);
    CHECK(std::abs(momentum(s) - l0) / l0 < 1e-6);
    CHECK(std::abs(s.attitude.norm() - 1.0) < 1e-9);
  }
  SUBCASE("dt bounds enforced") {
    veh::VehicleState s;
    CHECK_THROWS_AS(veh::step_dynamics(s, geom, {}, {}, 0.011),
                    std::invalid_argument);
    CHECK_THROWS_AS(veh::step_dynamics(s, geom, {}, {}, 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("small roll impulses match the double-integrator prediction") {
  // J_xx-scaled double integrator while the roll angle stays small.
  HexJetGeometry geom;
  veh::VehicleState s;
  const double torque = 0.05;  // N m, small
  double t = 0.0;
  while (std::abs(s.attitude.euler_angles().x()) < 5.0 * kDeg && t < 2.0) {
    s = veh::step_dynamics(s, geom, Eigen::Vector3d::Zero(),
                           {torque, 0, 0}, 0.004);
    t += 0.004;
    const double predicted_rate = torque / geom.inertia(0, 0) * t;
    CHECK(s.body_rate.x() == doctest::Approx(predicted_rate).epsilon(0.05));
  }
  CHECK(t > 0.5);  // the small-angle window was actually exercised
}

TEST_CASE("geometry validation") {
  HexJetGeometry geom;
  CHECK_NOTHROW(geom.validate());
  SUBCASE("hover infeasible") {
    HexJetGeometry heavy = geom;
    heavy.mass = 20.0;
    CHECK_THROWS_AS(heavy.validate(), std::invalid_argument);
  }
  SUBCASE("inertia must be SPD") {
    HexJetGeometry bad = geom;
    bad.inertia = Eigen::Vector3d(-0.1, 0.1, 0.1).asDiagonal();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }
  SUBCASE("engine positions follow the layout table") {
    CHECK(geom.engine_position(1) == Eigen::Vector3d(geom.lx, geom.ly, geom.lz));
    CHECK(geom.engine_position(6) == Eigen::Vector3d(0, -geom.ly, geom.lz));
    CHECK_THROWS_AS(geom.engine_position(7), std::invalid_argument);
  }
}

TEST_CASE("hexjet model: roll-rate model matches the nonlinear plant") {
  // Differential-throttle steps at hover trim; the exact discrete model
  // from roll_rate_model must reproduce the measured roll rate.
  HexJetGeometry geom;
  veh::ActuatorDynamicsConfig actuators;
  veh::HexJetModel model(geom, actuators, 0.004);
  const double span = 0.25;
  lti::TfSimulator predicted(model.roll_rate_model(span));

  const double hover = geom.mass * veh::kGravity;
  const auto hover_cmd = veh::allocate({hover, Eigen::Vector3d::Zero()}, geom);
  for (int k = 0; k < 500; ++k) model.step(hover_cmd);  // spool to trim

  std::mt19937 rng(23);
  std::uniform_real_distribution<double> cmd(-0.3, 0.3);
  double u = 0.0;
  for (int k = 0; k < 800; ++k) {
    if (k % 40 == 0) u = cmd(rng);
    // Both sequences indexed identically: compare before stepping.
    const double expected = predicted.step(u);
    const double actual = model.state().body_rate.x();
    CHECK(std::abs(actual - expected) <
          0.02 * std::max(0.05, std::abs(expected)));
    auto c = hover_cmd;
    const double delta = u * span;
    c.throttle_left = hover_cmd.throttle_left + delta;
    c.throttle_right = hover_cmd.throttle_right - delta;
    model.step(c);
  }
}

TEST_CASE("quad roll TF and SS responses differ and the gap is measured") {
  // The two identified quad models are not an exact pair; quantify the
  // impulse-response discrepancy instead of reconciling it.
  lti::TfSimulator tf(models::quad_roll_tf());
  lti::SsSimulator ss(lti::to_state_space(models::quad_roll_tf()));
  lti::SsSimulator printed(models::quad_roll_ss());
  double max_dev = 0.0;
  for (int k = 0; k < 400; ++k) {
    const double u = (k == 0) ? 1.0 : 0.0;
    const double y_tf = tf.step(u);
    (void)ss.step(u);
    const double y_ss = printed.step(u);
    max_dev = std::max(max_dev, std::abs(y_tf - y_ss));
  }
  MESSAGE("max impulse-response deviation TF vs printed SS over 400 steps: ",
          max_dev);
  CHECK(max_dev > 0.1);        // genuinely different realizations
  CHECK(std::isfinite(max_dev));
}
