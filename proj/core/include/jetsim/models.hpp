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

#ifndef JETSIM_MODELS_HPP
#define JETSIM_MODELS_HPP

#include "jetsim/lti.hpp"

// Identified plant models shipped with the toolkit. Coefficients are kept
// verbatim as identified; see docs/models.md.

namespace jetsim::models {

/// Loop period of the jet vehicle's flight controller (250 Hz).
inline constexpr double kJetSampleTime = 0.004;
/// Loop period of the quadrotor's rate controller (400 Hz).
inline constexpr double kQuadSampleTime = 0.0025;

/// Turbojet thrust response: first-order lag with a 25-sample (0.1 s)
/// transport delay, G(z) = 0.01866/(z - 0.9879) z^-25 at Ts = 4 ms.
lti::DelayedTransferFunction turbojet_thrust();

/// Same turbojet dynamics normalized to unity DC gain, for use as an
/// actuator lag when the static thrust map carries the gain.
lti::DelayedTransferFunction turbojet_thrust_normalized();

/// Electric ducted fan thrust response, G(z) = 0.2554/(z - 0.8748).
lti::DelayedTransferFunction edf_thrust();

/// Refined roll-channel model of the jet vehicle: second order plus
/// 25-sample input delay, with a non-minimum-phase zero at -1.4538.
lti::DelayedTransferFunction jet_roll_channel();

/// Quadrotor roll-rate transfer function at 400 Hz (delay-free nominal
/// model used by the predictors).
lti::DelayedTransferFunction quad_roll_tf();

/// Quadrotor roll-rate state-space matrices as identified. No output
/// matrix was identified with them; rate is taken as the first state,
/// C = [1 0], D = 0. Note this realization does NOT reproduce
/// quad_roll_tf(); the two are kept verbatim and their discrepancy is
/// measured rather than reconciled (see docs/models.md).
lti::LinearStateSpace quad_roll_ss();

/// Thrust-to-rate correction ratio turbojet/EDF used to refine scaled
/// vehicle sweep data toward full-scale dynamics.
lti::DelayedTransferFunction turbo_over_edf();

}  // namespace jetsim::models

#endif  // JETSIM_MODELS_HPP
