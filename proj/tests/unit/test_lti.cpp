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

#include "jetsim/lti.hpp"
#include "jetsim/model_io.hpp"
#include "jetsim/models.hpp"

using namespace jetsim;
using lti::DelayedTransferFunction;

namespace {

std::vector<double> unit_step(std::size_t n) {
  return std::vector<double>(n, 1.0);
}

// Random stable second-order plant, poles well inside the unit circle.
DelayedTransferFunction random_stable_plant(std::mt19937& rng) {
  std::uniform_real_distribution<double> pole(-0.9, 0.9);
  std::uniform_real_distribution<double> gain(0.1, 2.0);
  std::uniform_int_distribution<int> delay(0, 10);
  const double p1 = pole(rng), p2 = pole(rng);
  return {{gain(rng)}, {1.0, -(p1 + p2), p1 * p2}, delay(rng), 0.004};
}

}  // namespace

TEST_CASE("identity plant passes input through") {
  lti::TfSimulator sim(DelayedTransferFunction({1.0}, {1.0}, 0, 0.004));
  CHECK(sim.step(3.7) == doctest::Approx(3.7).epsilon(1e-15));
  CHECK(sim.step(-1.25) == doctest::Approx(-1.25).epsilon(1e-15));
}

TEST_CASE("turbojet model: step response blanked by the transport delay") {
  lti::TfSimulator sim(models::turbojet_thrust());
  for (int k = 0; k <= 25; ++k) CHECK(sim.step(1.0) == 0.0);
}

TEST_CASE("turbojet model: unit-step steady state matches the DC gain") {
  // Oracle: closed form 0.01866/(1 - 0.9879), cross-checked by long
  // simulation.
  const double dc = 0.01866 / (1.0 - 0.9879);
  CHECK(dc == doctest::Approx(1.5421).epsilon(1e-4));
  lti::TfSimulator sim(models::turbojet_thrust());
  double y = 0.0;
  for (int k = 0; k < 10000; ++k) y = sim.step(1.0);
  CHECK(y == doctest::Approx(dc).epsilon(1e-6));
  CHECK(lti::dc_gain(models::turbojet_thrust()) ==
        doctest::Approx(dc).epsilon(1e-12));
}

TEST_CASE("step_tf rejects non-finite input") {
  lti::TfSimulator sim(models::edf_thrust());
  CHECK_THROWS_AS(sim.step(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(sim.step(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}

TEST_CASE("dc_gain examples") {
  SUBCASE("EDF model") {
    const double expected = 0.2554 / (1.0 - 0.8748);
    CHECK(lti::dc_gain(models::edf_thrust()) ==
          doctest::Approx(expected).epsilon(1e-12));
    lti::TfSimulator sim(models::edf_thrust());
    double y = 0.0;
    for (int k = 0; k < 10000; ++k) y = sim.step(1.0);
    CHECK(y == doctest::Approx(expected).epsilon(1e-6));
  }
  SUBCASE("pure gain with delay") {
    CHECK(lti::dc_gain(DelayedTransferFunction::gain(2.0, 0.004, 40)) == 2.0);
  }
  SUBCASE("near-integrating roll channel kept verbatim by default") {
    // Factored-form oracle for the same coefficients.
    const double expected =
        0.0689 * (1.0 + 1.4538) / ((1.0 - 0.9999) * (1.0 - 0.9024));
    CHECK(lti::dc_gain(models::jet_roll_channel()) ==
          doctest::Approx(expected).epsilon(1e-9));
    CHECK(expected == doctest::Approx(17322.42).epsilon(1e-4));
    // Opting into a pole-at-one tolerance classifies it as integrating.
    CHECK_THROWS_AS(lti::dc_gain(models::jet_roll_channel(), 1e-3),
                    lti::IntegratingPlantError);
  }
  SUBCASE("true integrator is rejected") {
    CHECK_THROWS_AS(
        lti::dc_gain(DelayedTransferFunction({1.0}, {1.0, -1.0}, 0, 0.004)),
        lti::IntegratingPlantError);
  }
}

TEST_CASE("dominant time constants of the identified models") {
  // Oracle: -Ts/ln(p) on the factored poles.
  CHECK(lti::dominant_time_constant(models::turbojet_thrust()) ==
        doctest::Approx(-0.004 / std::log(0.9879)).epsilon(1e-9));
  CHECK(lti::dominant_time_constant(models::turbojet_thrust()) ==
        doctest::Approx(0.32857).epsilon(1e-4));
  CHECK(lti::dominant_time_constant(models::edf_thrust()) ==
        doctest::Approx(-0.004 / std::log(0.8748)).epsilon(1e-9));
  CHECK(lti::dominant_time_constant(models::edf_thrust()) ==
        doctest::Approx(0.029904).epsilon(1e-4));

  SUBCASE("pole 1/e at Ts = 1 gives exactly one second") {
    const DelayedTransferFunction tf({1.0}, {1.0, -std::exp(-1.0)}, 0, 1.0);
    CHECK(lti::dominant_time_constant(tf) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("no real pole in (0,1)") {
    const DelayedTransferFunction tf({1.0}, {1.0, 0.5}, 0, 0.004);
    CHECK_THROWS_WITH_AS(lti::dominant_time_constant(tf),
                         "no dominant first-order mode", std::domain_error);
  }
}

TEST_CASE("evaluate_response") {
  SUBCASE("pure gain") {
    const auto fr =
        lti::evaluate_response(DelayedTransferFunction::gain(2.0, 0.004, 0),
                               std::vector<double>{0.1, 1.0, 50.0});
    for (const auto& g : fr.gains) {
      CHECK(g.real() == doctest::Approx(2.0).epsilon(1e-12));
      CHECK(g.imag() == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
  SUBCASE("pure delay: unit magnitude, phase -2*pi*f*Ts*h") {
    const auto g =
        lti::evaluate_at(DelayedTransferFunction::pure_delay(25, 0.004), 1.0);
    CHECK(std::abs(g) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::arg(g) ==
          doctest::Approx(-0.2 * std::numbers::pi).epsilon(1e-12));
  }
  SUBCASE("low-frequency limit approaches the DC gain") {
    const auto g = lti::evaluate_at(models::turbojet_thrust(), 1e-4);
    CHECK(std::abs(g) == doctest::Approx(1.5421).epsilon(1e-3));
  }
  SUBCASE("frequency outside (0, Nyquist] rejected") {
    CHECK_THROWS_AS(lti::evaluate_at(models::turbojet_thrust(), 126.0),
                    std::domain_error);
    CHECK_THROWS_AS(lti::evaluate_at(models::turbojet_thrust(), 0.0),
                    std::domain_error);
  }
}

TEST_CASE("series composition") {
  SUBCASE("identity is neutral") {
    const auto g = lti::series(models::edf_thrust(),
                               DelayedTransferFunction::gain(1.0, 0.004));
    CHECK(lti::dc_gain(g) ==
          doctest::Approx(lti::dc_gain(models::edf_thrust())));
    CHECK(g.delay_samples() == 0);
  }
  SUBCASE("two pure delays compose to their sum") {
    const auto g = lti::series(DelayedTransferFunction::pure_delay(3, 0.004),
                               DelayedTransferFunction::pure_delay(4, 0.004));
    CHECK(g.delay_samples() == 7);
    CHECK(lti::dc_gain(g) == doctest::Approx(1.0));
  }
  SUBCASE("sample-time mismatch rejected") {
    CHECK_THROWS_AS(lti::series(models::edf_thrust(), models::quad_roll_tf()),
                    std::invalid_argument);
  }
}

TEST_CASE("division: the turbojet/EDF refinement ratio") {
  const auto ratio = models::turbo_over_edf();
  CHECK(ratio.delay_samples() == 25);
  const auto p = lti::poles(ratio);
  const auto z = lti::zeros(ratio);
  REQUIRE(p.size() == 1);
  REQUIRE(z.size() == 1);
  CHECK(p[0].real() == doctest::Approx(0.9879).epsilon(1e-12));
  CHECK(z[0].real() == doctest::Approx(0.8748).epsilon(1e-12));
  CHECK(ratio.numerator().front() ==
        doctest::Approx(0.01866 / 0.2554).epsilon(1e-12));

  SUBCASE("inverting a delayed plant without delay budget is non-causal") {
    CHECK_THROWS_AS(
        lti::divide(models::edf_thrust(), models::turbojet_thrust()),
        lti::NonCausalError);
  }
}

TEST_CASE("feedback folds the delay into the closed loop") {
  // G = K z^-h under unity negative feedback: y(k) = K r(k-h) - K y(k-h).
  const double k_gain = 0.5;
  const int h = 6;
  const auto cl =
      lti::feedback(DelayedTransferFunction::gain(k_gain, 0.004, h));
  CHECK(cl.delay_samples() == 0);
  CHECK(lti::dc_gain(cl) ==
        doctest::Approx(k_gain / (1.0 + k_gain)).epsilon(1e-12));
  lti::TfSimulator closed(cl);
  std::vector<double> y_hist;  // reference recursion, oracle
  for (int k = 0; k < 200; ++k) {
    const double y_delayed =
        k >= h ? y_hist[static_cast<std::size_t>(k - h)] : 0.0;
    const double r_delayed = k >= h ? 1.0 : 0.0;
    const double expected = k_gain * r_delayed - k_gain * y_delayed;
    y_hist.push_back(expected);
    CHECK(closed.step(1.0) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("step response is zero for the first delay_samples steps") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto plant = random_stable_plant(rng);
    const auto y = lti::simulate(plant, unit_step(64));
    for (int k = 0; k < plant.delay_samples(); ++k)
      CHECK(y[static_cast<std::size_t>(k)] == 0.0);
  }
}

TEST_CASE("dc gain matches long-run step simulation on stable plants") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const auto plant = random_stable_plant(rng);
    const auto y = lti::simulate(plant, unit_step(20000));
    CHECK(lti::dc_gain(plant) == doctest::Approx(y.back()).epsilon(1e-6));
  }
}

TEST_CASE("canonical state-space realization matches the TF simulation") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> input(-1.0, 1.0);
  for (const auto& plant :
       {models::quad_roll_tf(), models::jet_roll_channel(),
        models::turbojet_thrust(), random_stable_plant(rng)}) {
    lti::TfSimulator tf_sim(plant);
    lti::SsSimulator ss_sim(lti::to_state_space(plant));
    for (int k = 0; k < 5000; ++k) {
      const double u = input(rng);
      CHECK(std::abs(tf_sim.step(u) - ss_sim.step(u)) < 1e-9);
    }
  }
}

TEST_CASE("composition delay is additive") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_stable_plant(rng);
    const auto b = random_stable_plant(rng);
    CHECK(lti::series(a, b).delay_samples() ==
          a.delay_samples() + b.delay_samples());
  }
}

TEST_CASE("transfer function validation") {
  CHECK_THROWS_AS(DelayedTransferFunction({1.0, 2.0}, {1.0}, 0, 0.004),
                  lti::NonCausalError);  // improper
  CHECK_THROWS_AS(DelayedTransferFunction({1.0}, {1.0}, -1, 0.004),
                  lti::NonCausalError);
  CHECK_THROWS_AS(DelayedTransferFunction({1.0}, {1.0}, 0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(DelayedTransferFunction({std::nan("")}, {1.0}, 0, 0.004),
                  std::invalid_argument);
  // Monic normalization.
  const DelayedTransferFunction tf({0.5}, {2.0, -1.0}, 0, 0.004);
  CHECK(tf.denominator()[0] == 1.0);
  CHECK(tf.denominator()[1] == doctest::Approx(-0.5));
  CHECK(tf.numerator()[0] == doctest::Approx(0.25));
}

TEST_CASE("delay line") {
  lti::DelayLine<double> dl(3, 0.5);
  CHECK(dl.push(1.0) == 0.5);  // pre-fill
  CHECK(dl.push(2.0) == 0.5);
  CHECK(dl.push(3.0) == 0.5);
  CHECK(dl.push(4.0) == 1.0);
  lti::DelayLine<double> zero(0);
  CHECK(zero.push(9.0) == 9.0);
}

TEST_CASE("model file round trip") {
  const auto original = models::jet_roll_channel();
  const auto parsed = lti::from_model_text(lti::to_model_text(original));
  CHECK(parsed.numerator() == original.numerator());
  CHECK(parsed.denominator() == original.denominator());
  CHECK(parsed.delay_samples() == original.delay_samples());
  CHECK(parsed.sample_time() == original.sample_time());

  CHECK_THROWS_AS(lti::from_model_text("format = tfm-1\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(lti::from_model_text("format = tfm-9\nnumerator = 1\n"
                                       "denominator = 1\ndelay_samples = 0\n"
                                       "sample_time = 0.004\n"),
                  std::invalid_argument);
}

TEST_CASE("quad roll state-space matrices kept verbatim") {
  const auto ss = models::quad_roll_ss();
  CHECK(ss.a()(0, 0) == 0.9991);
  CHECK(ss.a()(0, 1) == 0.0023);
  CHECK(ss.a()(1, 0) == -0.6953);
  CHECK(ss.a()(1, 1) == 0.8777);
  CHECK(ss.b()(0, 0) == 0.0);
  CHECK(ss.b()(1, 0) == 0.0234);
  CHECK(ss.c()(0, 0) == 1.0);
  CHECK(ss.c()(0, 1) == 0.0);
  CHECK(ss.sample_time() == 0.0025);
}
