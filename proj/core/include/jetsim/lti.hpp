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

#ifndef JETSIM_LTI_HPP
#define JETSIM_LTI_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace jetsim::lti {

/// Thrown when an operation would require a non-causal system (negative
/// total delay after composition) or an improper transfer function.
class NonCausalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown by dc_gain() when the plant has a pole at (or within the
/// configured tolerance of) z = 1.
class IntegratingPlantError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Fixed-length FIFO used to realize pure transport delay, u(k) -> u(k-h).
/// With length 0 it is the identity. Pre-fill defaults to zero (system at
/// rest) and is configurable for trim conditions.
template <class Value = double>
class DelayLine {
 public:
  explicit DelayLine(std::size_t length, Value fill = Value{})
      : buffer_(length, fill), head_(0) {}

  /// Pushes one sample and pops the sample delayed by length().
  Value push(const Value& in) {
    if (buffer_.empty()) return in;
    Value out = buffer_[head_];
    buffer_[head_] = in;
    head_ = (head_ + 1) % buffer_.size();
    return out;
  }

  void reset(Value fill = Value{}) {
    for (auto& v : buffer_) v = fill;
    head_ = 0;
  }

  std::size_t length() const { return buffer_.size(); }

 private:
  std::vector<Value> buffer_;
  std::size_t head_;
};

class LinearStateSpace;

/// Rational discrete-time transfer function N(z)/D(z) * z^{-h}.
///
/// Coefficients are stored in descending powers of z. The denominator is
/// normalized to be monic on construction; the function must be proper
/// (deg N <= deg D). `delay_samples` is the integer input delay h and
/// `sample_time` the loop period in seconds.
class DelayedTransferFunction {
 public:
  DelayedTransferFunction(std::vector<double> numerator,
                          std::vector<double> denominator, int delay_samples,
                          double sample_time);

  /// Static gain K as a degenerate transfer function K/1.
  static DelayedTransferFunction gain(double k, double sample_time,
                                      int delay_samples = 0);
  /// Pure transport delay z^{-h}.
  static DelayedTransferFunction pure_delay(int delay_samples,
                                            double sample_time);

  const std::vector<double>& numerator() const { return num_; }
  const std::vector<double>& denominator() const { return den_; }
  int delay_samples() const { return delay_; }
  double sample_time() const { return ts_; }

  /// Denominator degree (= state dimension of the canonical realization).
  int order() const { return static_cast<int>(den_.size()) - 1; }
  double nyquist_hz() const { return 0.5 / ts_; }

  /// Numerator padded with leading zeros to denominator length.
  std::vector<double> padded_numerator() const;

  std::string describe() const;

 private:
  std::vector<double> num_;
  std::vector<double> den_;
  int delay_;
  double ts_;
};

/// Discrete state-space realization x+ = Ax + Bu(k-h), y = Cx + Du(k-h).
class LinearStateSpace {
 public:
  LinearStateSpace(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c,
                   Eigen::MatrixXd d, int delay_samples, double sample_time);

  const Eigen::MatrixXd& a() const { return a_; }
  const Eigen::MatrixXd& b() const { return b_; }
  const Eigen::MatrixXd& c() const { return c_; }
  const Eigen::MatrixXd& d() const { return d_; }
  int delay_samples() const { return delay_; }
  double sample_time() const { return ts_; }
  int state_dim() const { return static_cast<int>(a_.rows()); }
  int input_dim() const { return static_cast<int>(b_.cols()); }
  int output_dim() const { return static_cast<int>(c_.rows()); }

 private:
  Eigen::MatrixXd a_, b_, c_, d_;
  int delay_;
  double ts_;
};

/// Empirical or analytic frequency response samples.
/// Frequencies are Hz, strictly increasing, in (0, Nyquist].
struct FrequencyResponse {
  std::vector<double> frequencies_hz;
  std::vector<std::complex<double>> gains;
  /// Magnitude-squared coherence per bin; empty for analytic responses.
  std::vector<double> coherence;

  void validate() const;
  std::size_t size() const { return frequencies_hz.size(); }
};

/// Simulation state for a DelayedTransferFunction, realized in
/// controllable canonical form with an input-side delay line.
class TfSimulator {
 public:
  explicit TfSimulator(DelayedTransferFunction plant);

  /// Advances one sample. Rejects non-finite input.
  double step(double input);

  void reset();
  const DelayedTransferFunction& plant() const { return plant_; }

 private:
  DelayedTransferFunction plant_;
  std::vector<double> a_;      // den[1..n]
  std::vector<double> c_;      // b[i] - a[i]*b0
  double d_;                   // b0
  std::vector<double> state_;  // canonical state, x[0] newest
  DelayLine<double> delay_;
};

/// Simulation state for a LinearStateSpace with its input delay line.
class SsSimulator {
 public:
  explicit SsSimulator(LinearStateSpace model);

  Eigen::VectorXd step(const Eigen::VectorXd& input);
  /// SISO convenience.
  double step(double input);

  void reset();
  const Eigen::VectorXd& state() const { return x_; }
  void set_state(const Eigen::VectorXd& x);
  const LinearStateSpace& model() const { return model_; }

 private:
  LinearStateSpace model_;
  Eigen::VectorXd x_;
  DelayLine<Eigen::VectorXd> delay_;
};

/// Runs a fresh simulation of `plant` over `input`, starting at rest.
std::vector<double> simulate(const DelayedTransferFunction& plant,
                             std::span<const double> input);

/// Steady-state gain N(1)/D(1). Delay has no effect. If `integrator_tol`
/// is positive, any pole within that distance of z = 1 raises
/// IntegratingPlantError; with the default 0 only an exact (to rounding)
/// zero of D at z = 1 does.
double dc_gain(const DelayedTransferFunction& plant,
               double integrator_tol = 0.0);

/// Time constant -Ts/ln(p) of the slowest real pole p in (0, 1).
/// Throws std::domain_error when no such pole exists.
double dominant_time_constant(const DelayedTransferFunction& plant);

/// Complex response N(e^{jwTs})/D(e^{jwTs}) * e^{-jwTs h} at the given
/// frequencies (Hz). All frequencies must lie in (0, Nyquist].
FrequencyResponse evaluate_response(const DelayedTransferFunction& plant,
                                    std::span<const double> frequencies_hz);

/// Response at a single frequency.
std::complex<double> evaluate_at(const DelayedTransferFunction& plant,
                                 double frequency_hz);

/// Series composition a*b. Delays add; sample times must match.
DelayedTransferFunction series(const DelayedTransferFunction& a,
                               const DelayedTransferFunction& b);

/// Unity negative feedback a/(1 + a). The delay of `a` is folded into the
/// closed-loop denominator, so the result carries delay 0.
DelayedTransferFunction feedback(const DelayedTransferFunction& a);

/// Division a/b (the model-refinement ratio). b's delay moves to the
/// result's numerator side; an improper quotient is absorbed into the
/// available delay. Throws NonCausalError when the total delay would be
/// negative.
DelayedTransferFunction divide(const DelayedTransferFunction& a,
                               const DelayedTransferFunction& b);

/// Controllable canonical realization; simulating it reproduces the
/// transfer function sample-for-sample.
LinearStateSpace to_state_space(const DelayedTransferFunction& plant);

/// Denominator roots.
std::vector<std::complex<double>> poles(const DelayedTransferFunction& plant);
/// Numerator roots.
std::vector<std::complex<double>> zeros(const DelayedTransferFunction& plant);

/// Roots of a real polynomial given in descending powers (companion
/// matrix eigenvalues).
std::vector<std::complex<double>> polynomial_roots(
    std::span<const double> coeffs_descending);

}  // namespace jetsim::lti

#endif  // JETSIM_LTI_HPP
