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

#ifndef JETSIM_BENCH_HPP
#define JETSIM_BENCH_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "jetsim/config.hpp"
#include "jetsim/control.hpp"
#include "jetsim/lti.hpp"
#include "jetsim/vehicle.hpp"

namespace jetsim::bench {

enum class PlantKind { kQuadRoll, kHexJet, kCustomTf };
enum class Variant { kBaseline, kSmith, kState };

std::string to_string(PlantKind kind);
std::string to_string(Variant variant);
PlantKind plant_kind_from_string(const std::string& s);
Variant variant_from_string(const std::string& s);

/// Signal holding +A for `positive_s`, then -A for `negative_s`, zero
/// otherwise.
struct DoubletSpec {
  double amplitude = 0.0;
  double positive_s = 0.5;
  double negative_s = 0.5;
  double start_s = 0.2;

  double value_at(double t) const;
  void validate() const;
};

struct GainConfig {
  ctl::AttitudeGains attitude;
  std::array<ctl::RatePidGains, 3> rate;
};

/// Tuned defaults for the quadrotor roll scenarios. See docs/tuning.md
/// for how these were chosen.
GainConfig quad_default_gains();
/// Tuned defaults for the six-jet vehicle scenarios.
GainConfig hexjet_default_gains();

struct Scenario {
  std::string name = "scenario";
  PlantKind plant = PlantKind::kQuadRoll;
  std::optional<lti::DelayedTransferFunction> custom_plant;
  Variant variant = Variant::kBaseline;
  int added_delay = 0;           // samples injected at the rate-controller output
  double payload_fraction = 0.0;  // plant-side mass/inertia scaling, model unchanged
  bool rate_loop_only = false;    // drive the rate loop directly
  bool metrics_on_rate = false;   // metrics use the rate error instead of
                                  // the tracked attitude error
  DoubletSpec setpoint;           // attitude (rad) or rate (rad/s) doublet
  DoubletSpec disturbance;        // added at the plant input, controller units
  double duration_s = 2.0;
  std::uint64_t seed = 1;
  double measurement_noise = 0.0;  // rad/s std dev on the rate measurement
  std::optional<GainConfig> gains;  // defaults per plant kind when unset
  double observer_pole = 0.75;      // discrete, both observer poles
  /// Differential-throttle span mapped to a full-scale roll command
  /// (six-jet plant only).
  double roll_command_span = 0.25;

  // Divergence detection.
  double rate_limit = 20.0;          // rad/s
  double attitude_error_limit = 1.5707963267948966;  // rad
  double sustain_s = 0.1;

  // Metrics window; end 0 means the full record.
  double metrics_start_s = 0.0;
  double metrics_end_s = 0.0;

  void validate() const;
  double sample_time() const;
};

struct Metrics {
  double rmse = 0.0;           // sqrt(mean(e^2))
  double mae = 0.0;            // max |e|
  std::optional<double> overshoot_pct;
  std::optional<double> settling_time_s;
  bool stable = true;
};

struct ExperimentRecord {
  std::string name;
  PlantKind plant = PlantKind::kQuadRoll;
  Variant variant = Variant::kBaseline;
  int added_delay = 0;
  double payload_fraction = 0.0;
  double sample_time = 0.0;

  std::vector<double> time;
  std::vector<double> setpoint;      // tracked quantity (attitude or rate)
  std::vector<double> measurement;   // tracked quantity, plant truth
  std::vector<double> rate_setpoint;
  std::vector<double> rate_measurement;
  std::vector<double> prediction;    // rate feedback seen by the controller
  std::vector<double> command;       // roll command before the added delay
  std::vector<double> disturbance;

  Metrics metrics;
  bool unstable = false;
  double unstable_at_s = 0.0;
};

/// Fixed-step deterministic closed-loop run of one scenario.
ExperimentRecord run_scenario(const Scenario& scenario);

/// Attitude-doublet tracking experiment (metrics over the record window).
ExperimentRecord doublet_tracking(Scenario scenario, const DoubletSpec& doublet);

/// Disturbance-rejection experiment: zero setpoint, doublet disturbance at
/// the plant input, rate-error metrics over the disturbance plus a 1 s tail.
ExperimentRecord disturbance_rejection(Scenario scenario);

/// Tracking experiment with plant-side payload scaling while every
/// predictor keeps the unscaled nominal model.
ExperimentRecord payload_robustness(Scenario scenario, double payload_fraction);

/// Runs scenarios concurrently (`jobs` threads; 0 = hardware default).
/// Results keep the input order.
std::vector<ExperimentRecord> run_all(const std::vector<Scenario>& scenarios,
                                      unsigned jobs = 0);

/// Comparison table of metrics with percentage deltas relative to the
/// record at `baseline_index`. All records must come from the same plant
/// kind and experiment shape.
std::string compare_table_text(const std::vector<ExperimentRecord>& records,
                               std::size_t baseline_index = 0);
std::string compare_table_csv(const std::vector<ExperimentRecord>& records,
                              std::size_t baseline_index = 0);

/// Trace CSV (one row per sample, 17 significant digits).
void write_trace_csv(const std::filesystem::path& path,
                     const ExperimentRecord& record);
/// Summary metrics, one JSON object per line.
void write_metrics_jsonl(const std::filesystem::path& path,
                         const std::vector<ExperimentRecord>& records);
std::string metrics_json_line(const ExperimentRecord& record);

/// Builds the scenario list described by a configuration (see
/// docs/config_format.md). `kind` selects the experiment family:
/// "step", "dist" or "payload".
std::vector<Scenario> scenarios_from_config(const cfg::Config& config,
                                            const std::string& kind);

/// Allowed configuration keys for scenario files.
std::span<const std::string_view> scenario_config_keys();

}  // namespace jetsim::bench

#endif  // JETSIM_BENCH_HPP
