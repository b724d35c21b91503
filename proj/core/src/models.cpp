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

#include "jetsim/models.hpp"

namespace jetsim::models {

lti::DelayedTransferFunction turbojet_thrust() {
  return {{0.01866}, {1.0, -0.9879}, 25, kJetSampleTime};
}

lti::DelayedTransferFunction turbojet_thrust_normalized() {
  // DC gain 0.01866/(1-0.9879) folded out.
  return {{1.0 - 0.9879}, {1.0, -0.9879}, 25, kJetSampleTime};
}

lti::DelayedTransferFunction edf_thrust() {
  return {{0.2554}, {1.0, -0.8748}, 0, kJetSampleTime};
}

lti::DelayedTransferFunction jet_roll_channel() {
  // 0.0689 (z + 1.4538) / ((z - 0.9999)(z - 0.9024)) z^-25
  const double a = 0.9999, b = 0.9024;
  return {{0.0689, 0.0689 * 1.4538}, {1.0, -(a + b), a * b}, 25,
          kJetSampleTime};
}

lti::DelayedTransferFunction quad_roll_tf() {
  return {{-0.7549, 0.9393}, {1.0, -1.8770, 0.8786}, 0, kQuadSampleTime};
}

lti::LinearStateSpace quad_roll_ss() {
  Eigen::MatrixXd a(2, 2), b(2, 1), c(1, 2), d(1, 1);
  a << 0.9991, 0.0023, -0.6953, 0.8777;
  b << 0.0, 0.0234;
  c << 1.0, 0.0;
  d << 0.0;
  return {a, b, c, d, 0, kQuadSampleTime};
}

lti::DelayedTransferFunction turbo_over_edf() {
  return lti::divide(turbojet_thrust(), edf_thrust());
}

}  // namespace jetsim::models
