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

#ifndef JETSIM_PREDICTOR_HPP
#define JETSIM_PREDICTOR_HPP

#include <Eigen/Dense>

#include "jetsim/lti.hpp"

namespace jetsim::pred {

/// Smith predictor inner loop.
///
/// Given the nominal plant model G_n(z) z^{-h}, forms the correction
/// P(z) = G_n(z) - G_n(z) z^{-h} and returns the predicted output
/// y_hat = P u + y. With an exact model the controller effectively sees
/// the delay-free plant G_n. P has zero DC gain, so steady-state
/// information always comes from the measurement.
class SmithPredictor {
 public:
  /// `nominal` is the full model including its delay h.
  explicit SmithPredictor(lti::DelayedTransferFunction nominal);

  /// Advances the internal models by one sample and returns y_hat(k).
  double predict(double control_input, double measured_output);

  void reset();
  const lti::DelayedTransferFunction& nominal() const;
  int delay_samples() const { return static_cast<int>(delayed_tap_.length()); }

 private:
  lti::TfSimulator model_free_;        // G_n
  lti::DelayLine<double> delayed_tap_; // realizes G_n z^{-h} from the same state
};

/// d-step ahead state predictor,
///   x_p(k+d) = A^d x(k) + A^{d-1} B u(k-d) + ... + B u(k-1),
/// computable from the current state estimate and the buffered past
/// inputs. For an exact disturbance-free linear plant with input delay d
/// this equals the true x(k+d).
class StatePredictor {
 public:
  StatePredictor(Eigen::MatrixXd a, Eigen::VectorXd b, int horizon);
  StatePredictor(const lti::LinearStateSpace& model, int horizon);

  /// Records u(k) after the control update; it becomes u(k-1) at the
  /// next call to predict().
  void push_input(double u);

  Eigen::VectorXd predict(const Eigen::VectorXd& current_state) const;

  int horizon() const { return horizon_; }
  void reset();

 private:
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  int horizon_;
  Eigen::MatrixXd a_pow_d_;
  std::vector<Eigen::VectorXd> a_pow_b_;  // A^j B, j = 0..d-1
  std::vector<double> history_;           // ring, last d inputs
  std::size_t head_ = 0;
};

/// Observer gain vector for the double-integrator rate observer.
struct ObserverGains {
  double beta1 = 0.0;
  double beta2 = 0.0;

  /// Pole placement: maps desired discrete-time observer poles (at the
  /// given sample time) to continuous gains via s = ln(p)/Ts.
  static ObserverGains from_discrete_poles(double p1, double p2,
                                           double sample_time);
};

/// Luenberger observer for the double-integrator rate model
///   x = [omega, d omega/dt],  dx/dt = (A - L C) x + B u + L y,
/// discretized exactly (matrix exponential) at the loop sample time.
/// Construction rejects gains whose discretized error dynamics are not
/// strictly stable.
class LuenbergerObserver {
 public:
  LuenbergerObserver(ObserverGains gains, double sample_time);

  /// Advances the estimate one sample; returns x_hat(k+1).
  Eigen::Vector2d step(double control_input, double measured_rate);

  const Eigen::Vector2d& estimate() const { return x_hat_; }
  void set_estimate(const Eigen::Vector2d& x) { x_hat_ = x; }
  void reset() { x_hat_.setZero(); }

  double sample_time() const { return ts_; }
  const ObserverGains& gains() const { return gains_; }
  /// Spectral radius of the discretized error dynamics.
  double error_decay_rate() const { return decay_rate_; }

 private:
  ObserverGains gains_;
  double ts_;
  Eigen::Matrix2d phi_;              // exp((A-LC) Ts)
  Eigen::Matrix<double, 2, 2> gamma_;  // integral of exp((A-LC)s) ds * [B, L]
  Eigen::Vector2d x_hat_ = Eigen::Vector2d::Zero();
  double decay_rate_ = 0.0;
};

}  // namespace jetsim::pred

#endif  // JETSIM_PREDICTOR_HPP
