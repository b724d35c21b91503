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

#include "jetsim/lti.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace jetsim::lti {
namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

// Drops leading (high-power) coefficients that are exactly zero.
std::vector<double> strip_leading_zeros(std::vector<double> v) {
  std::size_t i = 0;
  while (i + 1 < v.size() && v[i] == 0.0) ++i;
  v.erase(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(i));
  return v;
}

std::vector<double> conv(std::span<const double> a,
                         std::span<const double> b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

double polyval(std::span<const double> coeffs, double x) {
  double acc = 0.0;
  for (double c : coeffs) acc = acc * x + c;
  return acc;
}

std::complex<double> polyval(std::span<const double> coeffs,
                             std::complex<double> x) {
  std::complex<double> acc = 0.0;
  for (double c : coeffs) acc = acc * x + c;
  return acc;
}

void format_poly(std::ostringstream& os, std::span<const double> coeffs) {
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i) os << ' ';
    os << coeffs[i];
  }
}

}  // namespace

DelayedTransferFunction::DelayedTransferFunction(
    std::vector<double> numerator, std::vector<double> denominator,
    int delay_samples, double sample_time)
    : num_(strip_leading_zeros(std::move(numerator))),
      den_(strip_leading_zeros(std::move(denominator))),
      delay_(delay_samples),
      ts_(sample_time) {
  if (num_.empty() || den_.empty())
    throw std::invalid_argument("transfer function: empty coefficient list");
  if (!all_finite(num_) || !all_finite(den_))
    throw std::invalid_argument("transfer function: non-finite coefficient");
  if (den_[0] == 0.0)
    throw std::invalid_argument("transfer function: zero denominator");
  if (num_.size() > den_.size())
    throw NonCausalError("transfer function: improper (deg N > deg D)");
  if (delay_ < 0)
    throw NonCausalError("transfer function: negative delay");
  if (!(ts_ > 0.0) || !std::isfinite(ts_))
    throw std::invalid_argument("transfer function: sample_time must be > 0");
  // Monic normalization.
  if (den_[0] != 1.0) {
    const double lead = den_[0];
    for (auto& c : den_) c /= lead;
    for (auto& c : num_) c /= lead;
  }
}

DelayedTransferFunction DelayedTransferFunction::gain(double k,
                                                      double sample_time,
                                                      int delay_samples) {
  return DelayedTransferFunction({k}, {1.0}, delay_samples, sample_time);
}

DelayedTransferFunction DelayedTransferFunction::pure_delay(
    int delay_samples, double sample_time) {
  return gain(1.0, sample_time, delay_samples);
}

std::vector<double> DelayedTransferFunction::padded_numerator() const {
  std::vector<double> padded(den_.size() - num_.size(), 0.0);
  padded.insert(padded.end(), num_.begin(), num_.end());
  return padded;
}

std::string DelayedTransferFunction::describe() const {
  std::ostringstream os;
  os.precision(10);
  os << "N(z) = [";
  format_poly(os, num_);
  os << "], D(z) = [";
  format_poly(os, den_);
  os << "], delay = " << delay_ << " samples, Ts = " << ts_ << " s";
  return os.str();
}

LinearStateSpace::LinearStateSpace(Eigen::MatrixXd a, Eigen::MatrixXd b,
                                   Eigen::MatrixXd c, Eigen::MatrixXd d,
                                   int delay_samples, double sample_time)
    : a_(std::move(a)),
      b_(std::move(b)),
      c_(std::move(c)),
      d_(std::move(d)),
      delay_(delay_samples),
      ts_(sample_time) {
  const auto n = a_.rows();
  const auto m = b_.cols();
  const auto p = c_.rows();
  if (a_.cols() != n || b_.rows() != n || c_.cols() != n || d_.rows() != p ||
      d_.cols() != m)
    throw std::invalid_argument("state space: inconsistent dimensions");
  if (delay_ < 0) throw NonCausalError("state space: negative delay");
  if (!(ts_ > 0.0))
    throw std::invalid_argument("state space: sample_time must be > 0");
}

void FrequencyResponse::validate() const {
  if (frequencies_hz.size() != gains.size())
    throw std::invalid_argument("frequency response: length mismatch");
  if (!coherence.empty() && coherence.size() != gains.size())
    throw std::invalid_argument("frequency response: coherence length");
  for (std::size_t i = 1; i < frequencies_hz.size(); ++i)
    if (!(frequencies_hz[i] > frequencies_hz[i - 1]))
      throw std::invalid_argument(
          "frequency response: frequencies must be strictly increasing");
  if (!frequencies_hz.empty() && !(frequencies_hz.front() > 0.0))
    throw std::invalid_argument("frequency response: frequencies must be > 0");
}

TfSimulator::TfSimulator(DelayedTransferFunction plant)
    : plant_(std::move(plant)),
      delay_(static_cast<std::size_t>(plant_.delay_samples())) {
  const auto& den = plant_.denominator();
  const auto b = plant_.padded_numerator();
  const int n = plant_.order();
  a_.assign(den.begin() + 1, den.end());
  d_ = b[0];
  c_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    c_[static_cast<std::size_t>(i)] =
        b[static_cast<std::size_t>(i) + 1] - a_[static_cast<std::size_t>(i)] * d_;
  state_.assign(static_cast<std::size_t>(n), 0.0);
}

double TfSimulator::step(double input) {
  if (!std::isfinite(input))
    throw std::invalid_argument("TfSimulator::step: non-finite input");
  const double u = delay_.push(input);
  double y = d_ * u;
  for (std::size_t i = 0; i < state_.size(); ++i) y += c_[i] * state_[i];
  if (!state_.empty()) {
    double x0 = u;
    for (std::size_t i = 0; i < state_.size(); ++i) x0 -= a_[i] * state_[i];
    // Shift register: x[i] <- x[i-1].
    for (std::size_t i = state_.size() - 1; i > 0; --i)
      state_[i] = state_[i - 1];
    state_[0] = x0;
  }
  return y;
}

void TfSimulator::reset() {
  std::fill(state_.begin(), state_.end(), 0.0);
  delay_.reset();
}

SsSimulator::SsSimulator(LinearStateSpace model)
    : model_(std::move(model)),
      x_(Eigen::VectorXd::Zero(model_.state_dim())),
      delay_(static_cast<std::size_t>(model_.delay_samples()),
             Eigen::VectorXd::Zero(model_.input_dim())) {}

Eigen::VectorXd SsSimulator::step(const Eigen::VectorXd& input) {
  if (input.size() != model_.input_dim())
    throw std::invalid_argument("SsSimulator::step: input dimension");
  if (!input.allFinite())
    throw std::invalid_argument("SsSimulator::step: non-finite input");
  const Eigen::VectorXd u = delay_.push(input);
  Eigen::VectorXd y = model_.c() * x_ + model_.d() * u;
  x_ = model_.a() * x_ + model_.b() * u;
  return y;
}

double SsSimulator::step(double input) {
  Eigen::VectorXd u(1);
  u << input;
  return step(u)(0);
}

void SsSimulator::reset() {
  x_.setZero();
  delay_.reset(Eigen::VectorXd::Zero(model_.input_dim()));
}

void SsSimulator::set_state(const Eigen::VectorXd& x) {
  if (x.size() != model_.state_dim())
    throw std::invalid_argument("SsSimulator::set_state: dimension");
  x_ = x;
}

std::vector<double> simulate(const DelayedTransferFunction& plant,
                             std::span<const double> input) {
  TfSimulator sim(plant);
  std::vector<double> out;
  out.reserve(input.size());
  for (double u : input) out.push_back(sim.step(u));
  return out;
}

double dc_gain(const DelayedTransferFunction& plant, double integrator_tol) {
  const auto& den = plant.denominator();
  const double d1 = polyval(den, 1.0);
  double scale = 0.0;
  for (double c : den) scale += std::abs(c);
  if (std::abs(d1) <= 1e-12 * scale)
    throw IntegratingPlantError("integrating plant, DC gain undefined");
  if (integrator_tol > 0.0) {
    for (const auto& p : poles(plant))
      if (std::abs(p - std::complex<double>(1.0, 0.0)) <= integrator_tol)
        throw IntegratingPlantError("integrating plant, DC gain undefined");
  }
  return polyval(plant.numerator(), 1.0) / d1;
}

double dominant_time_constant(const DelayedTransferFunction& plant) {
  double slowest = -1.0;
  for (const auto& p : poles(plant)) {
    if (std::abs(p.imag()) > 1e-9 * (1.0 + std::abs(p.real()))) continue;
    const double r = p.real();
    if (r > 0.0 && r < 1.0) slowest = std::max(slowest, r);
  }
  if (slowest < 0.0)
    throw std::domain_error("no dominant first-order mode");
  return -plant.sample_time() / std::log(slowest);
}

std::complex<double> evaluate_at(const DelayedTransferFunction& plant,
                                 double frequency_hz) {
  if (!(frequency_hz > 0.0) || frequency_hz > plant.nyquist_hz() * (1 + 1e-12))
    throw std::domain_error("frequency outside (0, Nyquist]");
  const double wts = 2.0 * std::numbers::pi * frequency_hz * plant.sample_time();
  const std::complex<double> z = std::polar(1.0, wts);
  const std::complex<double> g =
      polyval(plant.numerator(), z) / polyval(plant.denominator(), z);
  return g * std::polar(1.0, -wts * plant.delay_samples());
}

FrequencyResponse evaluate_response(const DelayedTransferFunction& plant,
                                    std::span<const double> frequencies_hz) {
  FrequencyResponse fr;
  fr.frequencies_hz.assign(frequencies_hz.begin(), frequencies_hz.end());
  fr.gains.reserve(frequencies_hz.size());
  for (double f : frequencies_hz) fr.gains.push_back(evaluate_at(plant, f));
  fr.validate();
  return fr;
}

namespace {
void require_same_ts(const DelayedTransferFunction& a,
                     const DelayedTransferFunction& b) {
  if (a.sample_time() != b.sample_time())
    throw std::invalid_argument("sample-time mismatch in composition");
}
}  // namespace

DelayedTransferFunction series(const DelayedTransferFunction& a,
                               const DelayedTransferFunction& b) {
  require_same_ts(a, b);
  return DelayedTransferFunction(
      conv(a.numerator(), b.numerator()), conv(a.denominator(), b.denominator()),
      a.delay_samples() + b.delay_samples(), a.sample_time());
}

DelayedTransferFunction feedback(const DelayedTransferFunction& a) {
  // a/(1+a) with a = N/D z^-h: numerator N, denominator D*z^h + N.
  const auto& n = a.numerator();
  const auto& d = a.denominator();
  const auto h = static_cast<std::size_t>(a.delay_samples());
  std::vector<double> den(d.size() + h, 0.0);
  std::copy(d.begin(), d.end(), den.begin());
  // Add N aligned at the constant-coefficient end.
  for (std::size_t i = 0; i < n.size(); ++i)
    den[den.size() - n.size() + i] += n[i];
  den = strip_leading_zeros(std::move(den));
  if (den[0] == 0.0 || den.size() < n.size())
    throw std::invalid_argument("feedback: ill-posed loop (1 + G(inf) = 0)");
  return DelayedTransferFunction(n, den, 0, a.sample_time());
}

DelayedTransferFunction divide(const DelayedTransferFunction& a,
                               const DelayedTransferFunction& b) {
  require_same_ts(a, b);
  std::vector<double> num = conv(a.numerator(), b.denominator());
  std::vector<double> den = conv(a.denominator(), b.numerator());
  num = strip_leading_zeros(std::move(num));
  den = strip_leading_zeros(std::move(den));
  if (std::all_of(den.begin(), den.end(), [](double c) { return c == 0.0; }))
    throw std::invalid_argument("divide: zero denominator");
  int delay = a.delay_samples() - b.delay_samples();
  // An improper quotient is a d-step advance; absorb it into the delay.
  if (num.size() > den.size()) {
    const int excess = static_cast<int>(num.size() - den.size());
    delay -= excess;
    den.resize(den.size() + static_cast<std::size_t>(excess), 0.0);
  }
  if (delay < 0)
    throw NonCausalError("divide: non-causal result (negative total delay)");
  return DelayedTransferFunction(std::move(num), std::move(den), delay,
                                 a.sample_time());
}

LinearStateSpace to_state_space(const DelayedTransferFunction& plant) {
  const int n = plant.order();
  const auto& den = plant.denominator();
  const auto b = plant.padded_numerator();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd bm = Eigen::MatrixXd::Zero(n, 1);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(1, n);
  Eigen::MatrixXd d(1, 1);
  d(0, 0) = b[0];
  for (int i = 0; i < n; ++i) {
    a(0, i) = -den[static_cast<std::size_t>(i) + 1];
    c(0, i) = b[static_cast<std::size_t>(i) + 1] -
              den[static_cast<std::size_t>(i) + 1] * b[0];
  }
  for (int i = 1; i < n; ++i) a(i, i - 1) = 1.0;
  if (n > 0) bm(0, 0) = 1.0;
  return LinearStateSpace(a, bm, c, d, plant.delay_samples(),
                          plant.sample_time());
}

std::vector<std::complex<double>> polynomial_roots(
    std::span<const double> coeffs_descending) {
  std::vector<double> c(coeffs_descending.begin(), coeffs_descending.end());
  c = strip_leading_zeros(std::move(c));
  const int n = static_cast<int>(c.size()) - 1;
  if (n <= 0) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) comp(0, i) = -c[static_cast<std::size_t>(i) + 1] / c[0];
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) {
    return std::abs(x) > std::abs(y);
  });
  return roots;
}

std::vector<std::complex<double>> poles(const DelayedTransferFunction& plant) {
  return polynomial_roots(plant.denominator());
}

std::vector<std::complex<double>> zeros(const DelayedTransferFunction& plant) {
  return polynomial_roots(plant.numerator());
}

}  // namespace jetsim::lti
