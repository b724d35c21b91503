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
#include <filesystem>
#include <numbers>
#include <random>

#include "jetsim/models.hpp"
#include "jetsim/sysid.hpp"

using namespace jetsim;
using std::numbers::pi;

namespace {

// Deterministic gaussian via Box-Muller (independent of libstdc++'s
// distribution internals).
class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : rng_(seed) {}
  double operator()() {
    const double u1 = (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
  }

 private:
  std::mt19937_64 rng_;
};

sysid::FitSpec order_spec(int m, int n, int h_min, int h_max,
                          sysid::FitSpec::Weighting w =
                              sysid::FitSpec::Weighting::kUniform) {
  sysid::FitSpec spec;
  spec.numerator_degree = m;
  spec.denominator_degree = n;
  spec.delay_min = h_min;
  spec.delay_max = h_max;
  spec.weighting = w;
  return spec;
}

void check_coeffs(const lti::DelayedTransferFunction& got,
                  const lti::DelayedTransferFunction& want, double rel_tol) {
  REQUIRE(got.numerator().size() == want.numerator().size());
  REQUIRE(got.denominator().size() == want.denominator().size());
  for (std::size_t i = 0; i < want.numerator().size(); ++i)
    CHECK(got.numerator()[i] ==
          doctest::Approx(want.numerator()[i]).epsilon(rel_tol));
  for (std::size_t i = 0; i < want.denominator().size(); ++i)
    CHECK(got.denominator()[i] ==
          doctest::Approx(want.denominator()[i]).epsilon(rel_tol));
}

std::vector<double> log_band(double lo, double hi, std::size_t n) {
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i)
    f[i] = lo * std::pow(hi / lo, static_cast<double>(i) /
                                      (static_cast<double>(n) - 1.0));
  return f;
}

}  // namespace

TEST_CASE("sweep generation") {
  SUBCASE("equal start and end frequency gives a pure sinusoid") {
    sysid::SweepSpec spec;
    spec.f_start_hz = spec.f_end_hz = 2.0;
    spec.duration_s = 10.0;
    spec.sample_time = 0.004;
    spec.taper_fraction = 0.0;
    const auto u = sysid::generate_sweep(spec);
    for (std::size_t k = 0; k < u.size(); ++k)
      CHECK(u[k] == doctest::Approx(std::sin(2.0 * pi * 2.0 * 0.004 *
                                             static_cast<double>(k)))
                        .epsilon(1e-9));
  }
  SUBCASE("zero amplitude gives the zero sequence") {
    sysid::SweepSpec spec;
    spec.amplitude = 0.0;
    for (double v : sysid::generate_sweep(spec)) CHECK(v == 0.0);
  }
  SUBCASE("log sweep hits the geometric-mean frequency at mid-duration") {
    sysid::SweepSpec spec;
    spec.f_start_hz = 0.1;
    spec.f_end_hz = 20.0;
    spec.duration_s = 60.0;
    spec.sample_time = 0.004;
    CHECK(sysid::generate_sweep(spec).size() == 15000);
    CHECK(sysid::sweep_instantaneous_frequency(spec, 30.0) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(0.01));
    double prev = 0.0;
    for (double t = 0.0; t <= 60.0; t += 1.0) {
      const double f = sysid::sweep_instantaneous_frequency(spec, t);
      CHECK(f > prev);
      prev = f;
    }
  }
  SUBCASE("spec violations rejected") {
    sysid::SweepSpec spec;
    spec.f_start_hz = 0.0;
    CHECK_THROWS_AS(sysid::generate_sweep(spec), std::invalid_argument);
    spec = {};
    spec.f_end_hz = 200.0;  // above Nyquist at 0.004
    CHECK_THROWS_AS(sysid::generate_sweep(spec), std::invalid_argument);
    spec = {};
    spec.duration_s = 10.0;  // fewer than 3 periods of f_start
    spec.f_start_hz = 0.1;
    CHECK_THROWS_AS(sysid::generate_sweep(spec), std::invalid_argument);
  }
}

TEST_CASE("frequency response estimation") {
  SUBCASE("identity map: unit gain, zero phase, coherence ~ 1") {
    Gaussian noise(9);
    std::vector<double> u(16384);
    for (auto& v : u) v = noise();
    const auto fr = sysid::estimate_frequency_response(u, u, 0.004);
    for (std::size_t i = 0; i < fr.size(); ++i) {
      CHECK(std::abs(fr.gains[i] - 1.0) < 1e-9);
      CHECK(fr.coherence[i] >= 0.99);
    }
  }
  SUBCASE("pure 25-sample delay: unit magnitude, linear phase within 2%") {
    Gaussian noise(10);
    std::vector<double> u(32768);
    for (auto& v : u) v = noise();
    lti::TfSimulator delay(lti::DelayedTransferFunction::pure_delay(25, 0.004));
    std::vector<double> y;
    y.reserve(u.size());
    for (double v : u) y.push_back(delay.step(v));
    const auto fr = sysid::estimate_frequency_response(u, y, 0.004);
    for (std::size_t i = 0; i < fr.size(); ++i) {
      if (fr.coherence[i] < 0.6) continue;
      const auto expected =
          std::polar(1.0, -2.0 * pi * fr.frequencies_hz[i] * 0.004 * 25.0);
      CHECK(std::abs(fr.gains[i] - expected) < 0.02);
    }
  }
  SUBCASE("simulated turbojet sweep matches the analytic response") {
    sysid::SweepSpec spec;
    spec.f_start_hz = 0.05;
    spec.f_end_hz = 60.0;
    spec.duration_s = 300.0;
    spec.sample_time = 0.004;
    const auto u = sysid::generate_sweep(spec);
    const auto y = lti::simulate(models::turbojet_thrust(), u);
    const auto fr = sysid::estimate_frequency_response(u, y, 0.004);
    std::size_t checked = 0;
    for (std::size_t i = 0; i < fr.size(); ++i) {
      const double f = fr.frequencies_hz[i];
      if (fr.coherence[i] < 0.6 || f < spec.f_start_hz || f > spec.f_end_hz)
        continue;
      const auto expected = lti::evaluate_at(models::turbojet_thrust(), f);
      CHECK(std::abs(fr.gains[i]) ==
            doctest::Approx(std::abs(expected)).epsilon(0.05));
      CHECK(std::abs(std::arg(fr.gains[i] / expected)) * 180.0 / pi < 5.0);
      ++checked;
    }
    CHECK(checked > 500);
  }
  SUBCASE("input validation") {
    std::vector<double> a(4096, 1.0), b(100, 1.0), z(4096, 0.0);
    CHECK_THROWS_AS(sysid::estimate_frequency_response(a, b, 0.004),
                    std::invalid_argument);
    CHECK_THROWS_AS(sysid::estimate_frequency_response(z, z, 0.004),
                    std::invalid_argument);
    sysid::EstimationOptions opt;
    opt.segment_length = 4096;  // record shorter than 4x the window
    CHECK_THROWS_AS(sysid::estimate_frequency_response(a, a, 0.004, opt),
                    std::invalid_argument);
  }
}

TEST_CASE("fit recovers the identified models from exact response samples") {
  SUBCASE("EDF model, order (0,1), fixed zero delay") {
    const auto fr = lti::evaluate_response(models::edf_thrust(),
                                           log_band(0.05, 100.0, 400));
    const auto fit = sysid::fit_delayed_tf(fr, order_spec(0, 1, 0, 0), 0.004);
    check_coeffs(fit.model, models::edf_thrust(), 0.01);
    CHECK(fit.stable);
  }
  SUBCASE("turbojet model, order (0,1), delay searched over [0, 50]") {
    const auto fr = lti::evaluate_response(models::turbojet_thrust(),
                                           log_band(0.02, 100.0, 400));
    const auto fit = sysid::fit_delayed_tf(fr, order_spec(0, 1, 0, 50), 0.004);
    CHECK(fit.model.delay_samples() == 25);
    check_coeffs(fit.model, models::turbojet_thrust(), 0.01);
  }
  SUBCASE("roll channel, order (1,2), delay searched over [0, 50]") {
    const auto fr = lti::evaluate_response(models::jet_roll_channel(),
                                           log_band(0.005, 100.0, 600));
    const auto fit = sysid::fit_delayed_tf(
        fr,
        order_spec(1, 2, 0, 50, sysid::FitSpec::Weighting::kInverseMagnitude),
        0.004);
    CHECK(fit.model.delay_samples() == 25);
    check_coeffs(fit.model, models::jet_roll_channel(), 0.02);
    REQUIRE(fit.fitted_poles.size() == 2);
    CHECK(std::abs(fit.fitted_poles[0]) ==
          doctest::Approx(0.9999).epsilon(0.02));
    CHECK(std::abs(fit.fitted_poles[1]) ==
          doctest::Approx(0.9024).epsilon(0.02));
  }
  SUBCASE("too few bins for the requested order") {
    const auto fr =
        lti::evaluate_response(models::edf_thrust(), log_band(1.0, 10.0, 3));
    CHECK_THROWS_AS(sysid::fit_delayed_tf(fr, order_spec(0, 1, 0, 0), 0.004),
                    std::runtime_error);
  }
}

TEST_CASE("full sweep round trip on the quad roll model") {
  sysid::SweepSpec spec;
  spec.f_start_hz = 0.1;
  spec.f_end_hz = 100.0;
  spec.duration_s = 180.0;
  spec.sample_time = models::kQuadSampleTime;
  const auto u = sysid::generate_sweep(spec);
  const auto y = lti::simulate(models::quad_roll_tf(), u);
  const auto fr = sysid::estimate_frequency_response(u, y, spec.sample_time);
  const auto fit =
      sysid::fit_delayed_tf(fr, order_spec(1, 2, 0, 10), spec.sample_time);
  CHECK(fit.model.delay_samples() == 0);
  check_coeffs(fit.model, models::quad_roll_tf(), 0.02);
}

TEST_CASE("round trip with 20 dB SNR output noise") {
  sysid::SweepSpec spec;
  spec.f_start_hz = 0.05;
  spec.f_end_hz = 60.0;
  spec.duration_s = 300.0;
  spec.sample_time = 0.004;
  const auto u = sysid::generate_sweep(spec);
  auto y = lti::simulate(models::turbojet_thrust(), u);
  double power = 0.0;
  for (double v : y) power += v * v;
  const double noise_std =
      std::sqrt(power / static_cast<double>(y.size())) / 10.0;
  Gaussian noise(1234);
  for (auto& v : y) v += noise_std * noise();
  const auto fr = sysid::estimate_frequency_response(u, y, 0.004);
  const auto fit = sysid::fit_delayed_tf(fr, order_spec(0, 1, 0, 50), 0.004);
  CHECK(fit.model.delay_samples() == 25);
  CHECK(-fit.model.denominator()[1] == doctest::Approx(0.9879).epsilon(0.05));
}

TEST_CASE("refinement multiplies the response by the correction model") {
  const auto fr = lti::evaluate_response(
      models::edf_thrust(), std::vector<double>{0.5, 1.0, 5.0, 20.0});
  const auto refined = sysid::refine_response(fr, models::turbo_over_edf());
  for (std::size_t i = 0; i < fr.size(); ++i) {
    const auto expected =
        fr.gains[i] *
        lti::evaluate_at(models::turbo_over_edf(), fr.frequencies_hz[i]);
    CHECK(std::abs(refined.gains[i] - expected) < 1e-12);
  }
}

TEST_CASE("open-loop margins") {
  SUBCASE("half gain with delay: 6.02 dB gain margin") {
    const auto report = sysid::open_loop_margins(
        lti::DelayedTransferFunction::gain(0.5, 0.004, 25));
    REQUIRE(report.gain_margin_db.has_value());
    CHECK(*report.gain_margin_db ==
          doctest::Approx(-20.0 * std::log10(0.5)).epsilon(1e-4));
    CHECK_FALSE(report.crossover_hz.has_value());  // |L| never crosses 1
  }
  SUBCASE("unit-gain pure delay: -180 deg crossing where 2*pi*f*Ts*h = pi") {
    const auto report = sysid::open_loop_margins(
        lti::DelayedTransferFunction::pure_delay(25, 0.004));
    REQUIRE(report.phase_crossover_hz.has_value());
    // Oracle: 2*pi*f*0.1 = pi  =>  f = 5 Hz.
    CHECK(*report.phase_crossover_hz == doctest::Approx(5.0).epsilon(2e-3));
    REQUIRE(report.gain_margin_db.has_value());
    CHECK(*report.gain_margin_db == doctest::Approx(0.0).epsilon(1e-6));
  }
  SUBCASE("discrete integrator: analytic phase margin") {
    // L = K/(z-1): |L| = K/(2 sin(wTs/2)), phase = -pi/2 - wTs/2.
    const double k = 0.2, ts = 0.004;
    const auto report = sysid::open_loop_margins(
        lti::DelayedTransferFunction({k}, {1.0, -1.0}, 0, ts));
    const double theta_c = 2.0 * std::asin(k / 2.0);
    REQUIRE(report.crossover_hz.has_value());
    CHECK(*report.crossover_hz ==
          doctest::Approx(theta_c / (2.0 * pi * ts)).epsilon(1e-4));
    REQUIRE(report.phase_margin_deg.has_value());
    CHECK(*report.phase_margin_deg ==
          doctest::Approx(90.0 - 0.5 * theta_c * 180.0 / pi).epsilon(1e-3));
  }
  SUBCASE("added delay never increases the phase margin") {
    const auto base = lti::series(
        lti::DelayedTransferFunction::gain(2.0, 0.004), models::edf_thrust());
    double prev = 1e9;
    for (int h = 0; h <= 10; ++h) {
      const lti::DelayedTransferFunction loop(base.numerator(),
                                              base.denominator(), h, 0.004);
      const auto report = sysid::open_loop_margins(loop);
      REQUIRE(report.phase_margin_deg.has_value());
      CHECK(*report.phase_margin_deg <= prev + 1e-9);
      prev = *report.phase_margin_deg;
    }
  }
  SUBCASE("report renders absent margins") {
    const auto report = sysid::open_loop_margins(
        lti::DelayedTransferFunction::gain(0.5, 0.004, 0));
    CHECK_FALSE(report.gain_margin_db.has_value());
    CHECK(report.to_text().find("absent") != std::string::npos);
  }
}

TEST_CASE("sweep log round trip") {
  const auto path = std::filesystem::temp_directory_path() / "jetsim_sweep.csv";
  sysid::SweepLog log;
  log.sample_time = 0.004;
  log.input = {0.0, 0.5, 1.0};
  log.output = {0.0, 0.125, 0.25};
  sysid::write_sweep_log(path, log);
  const auto loaded = sysid::read_sweep_log(path);
  CHECK(loaded.sample_time == 0.004);
  CHECK(loaded.input == log.input);
  CHECK(loaded.output == log.output);
  std::filesystem::remove(path);
}
