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

#include "jetsim/predictor.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace jetsim::pred {

SmithPredictor::SmithPredictor(lti::DelayedTransferFunction nominal)
    : model_free_(lti::DelayedTransferFunction(nominal.numerator(),
                                               nominal.denominator(), 0,
                                               nominal.sample_time())),
      delayed_tap_(static_cast<std::size_t>(nominal.delay_samples())) {}

double SmithPredictor::predict(double control_input, double measured_output) {
  if (!std::isfinite(control_input) || !std::isfinite(measured_output))
    throw std::invalid_argument("SmithPredictor::predict: non-finite input");
  const double model_out = model_free_.step(control_input);
  const double model_out_delayed = delayed_tap_.push(model_out);
  // Grouped so that P(z) = 0 (h = 0, or exact cancellation) leaves the
  // measurement bit-identical.
  return measured_output + (model_out - model_out_delayed);
}

void SmithPredictor::reset() {
  model_free_.reset();
  delayed_tap_.reset();
}

const lti::DelayedTransferFunction& SmithPredictor::nominal() const {
  return model_free_.plant();
}

StatePredictor::StatePredictor(Eigen::MatrixXd a, Eigen::VectorXd b,
                               int horizon)
    : a_(std::move(a)), b_(std::move(b)), horizon_(horizon) {
  if (a_.rows() != a_.cols() || b_.size() != a_.rows())
    throw std::invalid_argument("StatePredictor: dimension mismatch");
  if (horizon_ < 0)
    throw std::invalid_argument("StatePredictor: negative horizon");
  const auto n = a_.rows();
  a_pow_d_ = Eigen::MatrixXd::Identity(n, n);
  a_pow_b_.reserve(static_cast<std::size_t>(horizon_));
  Eigen::MatrixXd a_pow = Eigen::MatrixXd::Identity(n, n);
  for (int j = 0; j < horizon_; ++j) {
    a_pow_b_.push_back(a_pow * b_);
    a_pow = a_ * a_pow;
  }
  a_pow_d_ = a_pow;
  history_.assign(static_cast<std::size_t>(horizon_), 0.0);
}

StatePredictor::StatePredictor(const lti::LinearStateSpace& model, int horizon)
    : StatePredictor(model.a(), model.b().col(0), horizon) {
  if (model.input_dim() != 1)
    throw std::invalid_argument("StatePredictor: single-input models only");
}

void StatePredictor::push_input(double u) {
  if (history_.empty()) return;
  history_[head_] = u;
  head_ = (head_ + 1) % history_.size();
}

Eigen::VectorXd StatePredictor::predict(
    const Eigen::VectorXd& current_state) const {
  if (current_state.size() != a_.rows())
    throw std::invalid_argument("StatePredictor::predict: state dimension");
  Eigen::VectorXd x = a_pow_d_ * current_state;
  // u(k-1) is the most recently pushed sample (weight B), u(k-d) the
  // oldest (weight A^{d-1} B).
  for (int i = 1; i <= horizon_; ++i) {
    const std::size_t idx =
        (head_ + history_.size() - static_cast<std::size_t>(i)) %
        history_.size();
    x += a_pow_b_[static_cast<std::size_t>(i - 1)] * history_[idx];
  }
  return x;
}

void StatePredictor::reset() {
  std::fill(history_.begin(), history_.end(), 0.0);
  head_ = 0;
}

ObserverGains ObserverGains::from_discrete_poles(double p1, double p2,
                                                 double sample_time) {
  if (!(p1 > 0.0 && p1 < 1.0 && p2 > 0.0 && p2 < 1.0))
    throw std::invalid_argument(
        "ObserverGains: discrete poles must lie in (0, 1)");
  const double s1 = std::log(p1) / sample_time;
  const double s2 = std::log(p2) / sample_time;
  // det(sI - (A - LC)) = s^2 + beta1 s + beta2
  return {-(s1 + s2), s1 * s2};
}

LuenbergerObserver::LuenbergerObserver(ObserverGains gains, double sample_time)
    : gains_(gains), ts_(sample_time) {
  if (!(ts_ > 0.0))
    throw std::invalid_argument("LuenbergerObserver: sample_time must be > 0");
  Eigen::Matrix2d ac;
  ac << -gains_.beta1, 1.0, -gains_.beta2, 0.0;
  Eigen::Matrix2d bc;  // columns: [B, L]
  bc << 0.0, gains_.beta1, 1.0, gains_.beta2;
  // Exact ZOH discretization via the augmented matrix exponential.
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m.topLeftCorner<2, 2>() = ac * ts_;
  m.topRightCorner<2, 2>() = bc * ts_;
  const Eigen::Matrix4d em = m.exp();
  phi_ = em.topLeftCorner<2, 2>();
  gamma_ = em.topRightCorner<2, 2>();
  decay_rate_ = std::max(std::abs(phi_.eigenvalues()(0)),
                         std::abs(phi_.eigenvalues()(1)));
  if (decay_rate_ >= 1.0)
    throw std::invalid_argument(
        "LuenbergerObserver: unstable gain configuration");
}

Eigen::Vector2d LuenbergerObserver::step(double control_input,
                                         double measured_rate) {
  if (!std::isfinite(control_input) || !std::isfinite(measured_rate))
    throw std::invalid_argument("LuenbergerObserver::step: non-finite input");
  const Eigen::Vector2d in(control_input, measured_rate);
  x_hat_ = phi_ * x_hat_ + gamma_ * in;
  return x_hat_;
}

}  // namespace jetsim::pred
