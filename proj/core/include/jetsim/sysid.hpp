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

#ifndef JETSIM_SYSID_HPP
#define JETSIM_SYSID_HPP

#include <filesystem>
#include <optional>
#include <string>

#include "jetsim/lti.hpp"

namespace jetsim::sysid {

/// Logarithmic frequency sweep (chirp) with cosine-tapered ends.
struct SweepSpec {
  double f_start_hz = 0.1;
  double f_end_hz = 20.0;
  double duration_s = 60.0;
  double amplitude = 1.0;
  double sample_time = 0.004;
  double taper_fraction = 0.05;  // of the total duration, each end

  void validate() const;
};

/// Excitation sequence for the given spec. The instantaneous frequency
/// rises monotonically (geometrically) from f_start to f_end; with
/// f_start == f_end the result is a pure sinusoid.
std::vector<double> generate_sweep(const SweepSpec& spec);

/// Instantaneous frequency of the sweep at time t (for tests/plots).
double sweep_instantaneous_frequency(const SweepSpec& spec, double t);

struct EstimationOptions {
  /// Welch segment length (power of two). 0 selects automatically.
  std::size_t segment_length = 0;
  double overlap = 0.5;
  /// Bins below this magnitude-squared coherence are flagged (and
  /// excluded from fitting).
  double coherence_threshold = 0.6;
};

/// Cross-spectral (Welch) estimate G(f) = S_uy / S_uu over Hann-windowed
/// overlapping segments, with per-bin magnitude-squared coherence.
lti::FrequencyResponse estimate_frequency_response(
    std::span<const double> input, std::span<const double> output,
    double sample_time, const EstimationOptions& options = {});

/// Multiplies the response bin-wise by `correction` evaluated at each
/// frequency (the model-refinement stage applied to sweep data).
lti::FrequencyResponse refine_response(
    const lti::FrequencyResponse& response,
    const lti::DelayedTransferFunction& correction);

struct FitSpec {
  int numerator_degree = 0;
  int denominator_degree = 1;
  int delay_min = 0;
  int delay_max = 0;
  enum class Weighting { kUniform, kInverseMagnitude } weighting =
      Weighting::kUniform;
  double coherence_threshold = 0.6;
  int sk_iterations = 3;

  void validate() const;
};

struct FitResult {
  lti::DelayedTransferFunction model;
  double residual = 0.0;  // weighted output-error residual at the chosen delay
  std::vector<std::complex<double>> fitted_poles;
  bool stable = true;     // reported, never enforced
};

/// Fits N(z)/D(z) z^{-h} to the response by Levy's linearized least
/// squares with Sanathanan-Koerner reweighting, searching h over the
/// integer grid [delay_min, delay_max]. Ties break toward the smallest h.
FitResult fit_delayed_tf(const lti::FrequencyResponse& response,
                         const FitSpec& spec, double sample_time);

struct MarginReport {
  /// 0 dB open-loop gain crossover.
  std::optional<double> crossover_hz;
  /// -3 dB closed-loop cutoff (unity negative feedback around the loop).
  std::optional<double> cutoff_hz;
  std::optional<double> gain_margin_db;   // at the lowest -180 deg crossing
  std::optional<double> phase_margin_deg; // at the lowest 0 dB crossover
  std::optional<double> phase_crossover_hz;

  std::string to_text() const;
};

/// Gain/phase margins of an open-loop transfer function, with
/// delay-aware phase unwrapping. Crossings are refined by bisection.
MarginReport open_loop_margins(const lti::DelayedTransferFunction& loop);

/// Sweep log I/O: CSV with a `# sample_time = ...` header line and
/// time,input,output columns (full precision).
struct SweepLog {
  double sample_time = 0.0;
  std::vector<double> input;
  std::vector<double> output;
};

void write_sweep_log(const std::filesystem::path& path, const SweepLog& log);
SweepLog read_sweep_log(const std::filesystem::path& path);

}  // namespace jetsim::sysid

#endif  // JETSIM_SYSID_HPP
