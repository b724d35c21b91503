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

#include "jetsim/sysid.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

namespace jetsim::sysid {
namespace {

using std::numbers::pi;
using cplx = std::complex<double>;

// In-place iterative radix-2 FFT; size must be a power of two.
void fft(std::vector<cplx>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * pi / static_cast<double>(len);
    const cplx wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const cplx u = a[i + j];
        const cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

bool is_pow2(std::size_t n) { return n && (n & (n - 1)) == 0; }

std::size_t floor_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p * 2 <= n) p *= 2;
  return p;
}

cplx polyval(std::span<const double> coeffs, cplx z) {
  cplx acc = 0.0;
  for (double c : coeffs) acc = acc * z + c;
  return acc;
}

}  // namespace

void SweepSpec::validate() const {
  if (!(sample_time > 0.0)) throw std::invalid_argument("sweep: sample_time");
  const double nyquist = 0.5 / sample_time;
  if (!(f_start_hz > 0.0) || !(f_end_hz >= f_start_hz) ||
      f_end_hz > nyquist * (1 + 1e-12))
    throw std::invalid_argument(
        "sweep: need 0 < f_start <= f_end <= Nyquist");
  if (!(duration_s * f_start_hz >= 3.0))
    throw std::invalid_argument(
        "sweep: duration must cover at least 3 periods of f_start");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw std::invalid_argument("sweep: amplitude");
  if (taper_fraction < 0.0 || taper_fraction > 0.5)
    throw std::invalid_argument("sweep: taper fraction outside [0, 0.5]");
}

double sweep_instantaneous_frequency(const SweepSpec& spec, double t) {
  if (spec.f_end_hz == spec.f_start_hz) return spec.f_start_hz;
  const double ratio = spec.f_end_hz / spec.f_start_hz;
  return spec.f_start_hz * std::pow(ratio, t / spec.duration_s);
}

std::vector<double> generate_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t n =
      static_cast<std::size_t>(std::llround(spec.duration_s / spec.sample_time));
  std::vector<double> out(n);
  const double ratio = spec.f_end_hz / spec.f_start_hz;
  const double log_ratio = std::log(ratio);
  const std::size_t n_taper =
      static_cast<std::size_t>(spec.taper_fraction * static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * spec.sample_time;
    double phase;
    if (ratio == 1.0) {
      phase = 2.0 * pi * spec.f_start_hz * t;
    } else {
      phase = 2.0 * pi * spec.f_start_hz * spec.duration_s / log_ratio *
              (std::pow(ratio, t / spec.duration_s) - 1.0);
    }
    double w = 1.0;
    if (n_taper > 0) {
      if (i < n_taper)
        w = 0.5 * (1.0 - std::cos(pi * static_cast<double>(i) /
                                  static_cast<double>(n_taper)));
      else if (i >= n - n_taper)
        w = 0.5 * (1.0 - std::cos(pi * static_cast<double>(n - 1 - i) /
                                  static_cast<double>(n_taper)));
    }
    out[i] = spec.amplitude * w * std::sin(phase);
  }
  return out;
}

lti::FrequencyResponse estimate_frequency_response(
    std::span<const double> input, std::span<const double> output,
    double sample_time, const EstimationOptions& options) {
  if (input.size() != output.size())
    throw std::invalid_argument("estimate: input/output length mismatch");
  if (!(sample_time > 0.0)) throw std::invalid_argument("estimate: sample_time");
  if (std::all_of(input.begin(), input.end(), [](double v) { return v == 0.0; }))
    throw std::invalid_argument("estimate: all-zero input");

  std::size_t nseg = options.segment_length;
  if (nseg == 0) nseg = std::clamp<std::size_t>(floor_pow2(input.size() / 8), 256, 16384);
  if (!is_pow2(nseg))
    throw std::invalid_argument("estimate: segment length must be a power of two");
  if (input.size() < 4 * nseg)
    throw std::invalid_argument(
        "estimate: record must be at least 4x the analysis window");

  const std::size_t hop = std::max<std::size_t>(
      1, static_cast<std::size_t>(static_cast<double>(nseg) *
                                  (1.0 - options.overlap)));
  std::vector<double> window(nseg);
  for (std::size_t i = 0; i < nseg; ++i)
    window[i] = 0.5 * (1.0 - std::cos(2.0 * pi * static_cast<double>(i) /
                                      static_cast<double>(nseg - 1)));

  const std::size_t nbins = nseg / 2;  // k = 1 .. nseg/2
  std::vector<double> suu(nbins, 0.0), syy(nbins, 0.0);
  std::vector<cplx> suy(nbins, 0.0);
  std::vector<cplx> bu(nseg), by(nseg);

  for (std::size_t start = 0; start + nseg <= input.size(); start += hop) {
    double mu = 0.0, my = 0.0;
    for (std::size_t i = 0; i < nseg; ++i) {
      mu += input[start + i];
      my += output[start + i];
    }
    mu /= static_cast<double>(nseg);
    my /= static_cast<double>(nseg);
    for (std::size_t i = 0; i < nseg; ++i) {
      bu[i] = (input[start + i] - mu) * window[i];
      by[i] = (output[start + i] - my) * window[i];
    }
    fft(bu);
    fft(by);
    for (std::size_t k = 1; k <= nbins; ++k) {
      suu[k - 1] += std::norm(bu[k]);
      syy[k - 1] += std::norm(by[k]);
      suy[k - 1] += std::conj(bu[k]) * by[k];
    }
  }

  lti::FrequencyResponse fr;
  fr.frequencies_hz.reserve(nbins);
  fr.gains.reserve(nbins);
  fr.coherence.reserve(nbins);
  for (std::size_t k = 1; k <= nbins; ++k) {
    fr.frequencies_hz.push_back(static_cast<double>(k) /
                                (static_cast<double>(nseg) * sample_time));
    if (suu[k - 1] > 0.0) {
      fr.gains.push_back(suy[k - 1] / suu[k - 1]);
      const double denom = suu[k - 1] * syy[k - 1];
      fr.coherence.push_back(denom > 0.0 ? std::norm(suy[k - 1]) / denom : 0.0);
    } else {
      fr.gains.push_back(0.0);
      fr.coherence.push_back(0.0);
    }
  }
  fr.validate();
  return fr;
}

lti::FrequencyResponse refine_response(
    const lti::FrequencyResponse& response,
    const lti::DelayedTransferFunction& correction) {
  response.validate();
  lti::FrequencyResponse out = response;
  for (std::size_t i = 0; i < out.size(); ++i)
    out.gains[i] *= lti::evaluate_at(correction, out.frequencies_hz[i]);
  return out;
}

void FitSpec::validate() const {
  if (numerator_degree < 0 || denominator_degree < 0)
    throw std::invalid_argument("fit: negative model order");
  if (numerator_degree > denominator_degree)
    throw std::invalid_argument("fit: improper model order");
  if (delay_min > delay_max || delay_min < 0)
    throw std::invalid_argument("fit: bad delay range");
  if (sk_iterations < 1) throw std::invalid_argument("fit: sk_iterations");
}

namespace {

struct LevyFit {
  std::vector<double> num, den;
};

// One Levy/SK fit at fixed delay h on the pre-selected bins.
LevyFit levy_fit(const std::vector<double>& freqs, const std::vector<cplx>& g,
                 const std::vector<double>& base_weight, double ts, int h,
                 int m, int n, int sk_iterations) {
  const std::size_t nb = freqs.size();
  const int n_params = n + m + 1;
  std::vector<cplx> z(nb), g_free(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    const double wts = 2.0 * pi * freqs[i] * ts;
    z[i] = std::polar(1.0, wts);
    g_free[i] = g[i] * std::polar(1.0, wts * h);  // delay removed
  }

  std::vector<double> den(static_cast<std::size_t>(n) + 1, 0.0);
  den[0] = 1.0;
  std::vector<double> num(static_cast<std::size_t>(m) + 1, 0.0);

  std::vector<double> w = base_weight;
  for (int pass = 0; pass < sk_iterations; ++pass) {
    Eigen::MatrixXd a(2 * nb, n_params);
    Eigen::VectorXd rhs(2 * nb);
    for (std::size_t i = 0; i < nb; ++i) {
      const double sw = std::sqrt(w[i]);
      // den coefficients a_1..a_n multiply G' z^{n-j}; num b_0..b_m
      // multiply -z^{m-j}; rhs = -G' z^n.
      for (int j = 1; j <= n; ++j) {
        const cplx c = g_free[i] * std::pow(z[i], n - j) * sw;
        a(static_cast<Eigen::Index>(2 * i), j - 1) = c.real();
        a(static_cast<Eigen::Index>(2 * i + 1), j - 1) = c.imag();
      }
      for (int j = 0; j <= m; ++j) {
        const cplx c = -std::pow(z[i], m - j) * sw;
        a(static_cast<Eigen::Index>(2 * i), n + j) = c.real();
        a(static_cast<Eigen::Index>(2 * i + 1), n + j) = c.imag();
      }
      const cplx r = -g_free[i] * std::pow(z[i], n) * sw;
      rhs(static_cast<Eigen::Index>(2 * i)) = r.real();
      rhs(static_cast<Eigen::Index>(2 * i + 1)) = r.imag();
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < n_params)
      throw std::runtime_error("fit: rank-deficient normal equations");
    const Eigen::VectorXd theta = qr.solve(rhs);
    for (int j = 1; j <= n; ++j) den[static_cast<std::size_t>(j)] = theta(j - 1);
    for (int j = 0; j <= m; ++j) num[static_cast<std::size_t>(j)] = theta(n + j);
    // Sanathanan-Koerner reweighting by the current denominator.
    for (std::size_t i = 0; i < nb; ++i) {
      const double dmag = std::norm(polyval(den, z[i]));
      w[i] = base_weight[i] / std::max(dmag, 1e-30);
    }
  }
  return {num, den};
}

}  // namespace

FitResult fit_delayed_tf(const lti::FrequencyResponse& response,
                         const FitSpec& spec, double sample_time) {
  response.validate();
  spec.validate();

  std::vector<double> freqs;
  std::vector<cplx> g;
  std::vector<double> weight;
  for (std::size_t i = 0; i < response.size(); ++i) {
    if (!response.coherence.empty() &&
        response.coherence[i] < spec.coherence_threshold)
      continue;
    freqs.push_back(response.frequencies_hz[i]);
    g.push_back(response.gains[i]);
    double w = response.coherence.empty() ? 1.0 : response.coherence[i];
    if (spec.weighting == FitSpec::Weighting::kInverseMagnitude)
      w /= std::max(std::norm(response.gains[i]), 1e-30);
    weight.push_back(w);
  }
  const int n_params = spec.denominator_degree + spec.numerator_degree + 1;
  if (freqs.size() < 2 * static_cast<std::size_t>(n_params))
    throw std::runtime_error(
        "fit: not enough coherent bins for the requested order");

  std::optional<FitResult> best;
  for (int h = spec.delay_min; h <= spec.delay_max; ++h) {
    // Fit, then drop bins whose relative error sits far above the median
    // (spectral-leakage outliers at the sweep edges) and refit on the
    // survivors. Two trim rounds, fully deterministic.
    std::vector<double> fs = freqs;
    std::vector<cplx> gs = g;
    std::vector<double> ws = weight;
    LevyFit fit{};
    double residual = 0.0;
    for (int round = 0; round < 3; ++round) {
      fit = levy_fit(fs, gs, ws, sample_time, h, spec.numerator_degree,
                     spec.denominator_degree, spec.sk_iterations);
      lti::DelayedTransferFunction model(fit.num, fit.den, h, sample_time);
      std::vector<double> rel(fs.size());
      residual = 0.0;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        const cplx err = lti::evaluate_at(model, fs[i]) - gs[i];
        residual += ws[i] * std::norm(err);
        rel[i] = std::abs(err) / std::max(std::abs(gs[i]), 1e-30);
      }
      if (round == 2) break;
      std::vector<double> sorted = rel;
      std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                       sorted.end());
      const double cutoff =
          std::max(5.0 * sorted[sorted.size() / 2], 1e-12);
      std::vector<double> fs2;
      std::vector<cplx> gs2;
      std::vector<double> ws2;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        if (rel[i] > cutoff) continue;
        fs2.push_back(fs[i]);
        gs2.push_back(gs[i]);
        ws2.push_back(ws[i]);
      }
      if (fs2.size() == fs.size() ||
          fs2.size() < 2 * static_cast<std::size_t>(n_params))
        break;
      fs.swap(fs2);
      gs.swap(gs2);
      ws.swap(ws2);
    }
    lti::DelayedTransferFunction model(fit.num, fit.den, h, sample_time);
    if (!best || residual < best->residual) {
      FitResult r{std::move(model), residual, {}, true};
      best = std::move(r);
    }
  }
  best->fitted_poles = lti::poles(best->model);
  for (const auto& p : best->fitted_poles)
    if (std::abs(p) >= 1.0) best->stable = false;
  return std::move(*best);
}

namespace {

// Phase of the rational part, tracked continuously from the previous
// sample; the exact delay phase is added separately.
double rational_phase(const lti::DelayedTransferFunction& loop, double f,
                      double prev_phase) {
  const double wts = 2.0 * pi * f * loop.sample_time();
  const cplx z = std::polar(1.0, wts);
  const cplx g = polyval(loop.numerator(), z) / polyval(loop.denominator(), z);
  double ph = std::arg(g);
  while (ph - prev_phase > pi) ph -= 2.0 * pi;
  while (ph - prev_phase < -pi) ph += 2.0 * pi;
  return ph;
}

double delay_phase(const lti::DelayedTransferFunction& loop, double f) {
  return -2.0 * pi * f * loop.sample_time() * loop.delay_samples();
}

double loop_mag(const lti::DelayedTransferFunction& loop, double f) {
  const double wts = 2.0 * pi * f * loop.sample_time();
  const cplx z = std::polar(1.0, wts);
  return std::abs(polyval(loop.numerator(), z) /
                  polyval(loop.denominator(), z));
}

}  // namespace

MarginReport open_loop_margins(const lti::DelayedTransferFunction& loop) {
  MarginReport report;
  const double nyquist = loop.nyquist_hz();
  const double f_lo = nyquist * 1e-6;
  const int n_grid = 6000;

  std::vector<double> fs(n_grid), mag(n_grid), phase(n_grid);
  const double log_lo = std::log(f_lo), log_hi = std::log(nyquist);
  double prev_rational = 0.0;
  for (int i = 0; i < n_grid; ++i) {
    const double f = std::exp(log_lo + (log_hi - log_lo) * i / (n_grid - 1.0));
    fs[static_cast<std::size_t>(i)] = f;
    mag[static_cast<std::size_t>(i)] = loop_mag(loop, f);
    prev_rational = rational_phase(loop, f, prev_rational);
    phase[static_cast<std::size_t>(i)] = prev_rational + delay_phase(loop, f);
  }

  // Lowest 0 dB gain crossover -> phase margin.
  for (int i = 1; i < n_grid; ++i) {
    const double m0 = mag[static_cast<std::size_t>(i - 1)] - 1.0;
    const double m1 = mag[static_cast<std::size_t>(i)] - 1.0;
    if (m0 == 0.0 || m0 * m1 < 0.0) {
      double a = fs[static_cast<std::size_t>(i - 1)], b = fs[static_cast<std::size_t>(i)];
      for (int it = 0; it < 60 && (b - a) > 1e-9; ++it) {
        const double mid = 0.5 * (a + b);
        if ((loop_mag(loop, a) - 1.0) * (loop_mag(loop, mid) - 1.0) <= 0.0)
          b = mid;
        else
          a = mid;
      }
      const double fc = 0.5 * (a + b);
      report.crossover_hz = fc;
      double ph = rational_phase(loop, fc, phase[static_cast<std::size_t>(i - 1)] -
                                               delay_phase(loop, fs[static_cast<std::size_t>(i - 1)]));
      ph += delay_phase(loop, fc);
      report.phase_margin_deg = (ph + pi) * 180.0 / pi;
      break;
    }
  }

  // Lowest -180 deg phase crossing -> gain margin.
  for (int i = 1; i < n_grid; ++i) {
    const double p0 = phase[static_cast<std::size_t>(i - 1)] + pi;
    const double p1 = phase[static_cast<std::size_t>(i)] + pi;
    if (p0 == 0.0 || p0 * p1 < 0.0) {
      double a = fs[static_cast<std::size_t>(i - 1)], b = fs[static_cast<std::size_t>(i)];
      double pa = p0;
      double rational_a = phase[static_cast<std::size_t>(i - 1)] -
                          delay_phase(loop, fs[static_cast<std::size_t>(i - 1)]);
      for (int it = 0; it < 60 && (b - a) > 1e-9; ++it) {
        const double mid = 0.5 * (a + b);
        const double rational_mid = rational_phase(loop, mid, rational_a);
        const double pm = rational_mid + delay_phase(loop, mid) + pi;
        if (pa * pm <= 0.0) {
          b = mid;
        } else {
          a = mid;
          pa = pm;
          rational_a = rational_mid;
        }
      }
      const double fp = 0.5 * (a + b);
      report.phase_crossover_hz = fp;
      report.gain_margin_db = -20.0 * std::log10(loop_mag(loop, fp));
      break;
    }
  }

  // -3 dB closed-loop cutoff relative to the low-frequency closed loop.
  const auto cl_mag = [&](double f) {
    const double wts = 2.0 * pi * f * loop.sample_time();
    const cplx z = std::polar(1.0, wts);
    const cplx g = polyval(loop.numerator(), z) /
                   polyval(loop.denominator(), z) *
                   std::polar(1.0, delay_phase(loop, f));
    return std::abs(g / (1.0 + g));
  };
  const double cl_ref = cl_mag(f_lo);
  const double target = cl_ref * std::pow(10.0, -3.0 / 20.0);
  for (int i = 1; i < n_grid; ++i) {
    if (cl_mag(fs[static_cast<std::size_t>(i)]) < target) {
      double a = fs[static_cast<std::size_t>(i - 1)], b = fs[static_cast<std::size_t>(i)];
      for (int it = 0; it < 60 && (b - a) > 1e-9; ++it) {
        const double mid = 0.5 * (a + b);
        if (cl_mag(mid) < target)
          b = mid;
        else
          a = mid;
      }
      report.cutoff_hz = 0.5 * (a + b);
      break;
    }
  }
  return report;
}

std::string MarginReport::to_text() const {
  std::ostringstream os;
  os.precision(6);
  const auto line = [&](const char* name, const std::optional<double>& v,
                        const char* unit) {
    os << name << " = ";
    if (v)
      os << *v << ' ' << unit;
    else
      os << "absent";
    os << '\n';
  };
  line("gain_crossover_hz", crossover_hz, "Hz");
  line("phase_crossover_hz", phase_crossover_hz, "Hz");
  line("closed_loop_cutoff_hz", cutoff_hz, "Hz");
  line("gain_margin_db", gain_margin_db, "dB");
  line("phase_margin_deg", phase_margin_deg, "deg");
  return os.str();
}

void write_sweep_log(const std::filesystem::path& path, const SweepLog& log) {
  if (log.input.size() != log.output.size())
    throw std::invalid_argument("sweep log: length mismatch");
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  char buf[96];
  std::snprintf(buf, sizeof(buf), "# sample_time = %.17g\n", log.sample_time);
  os << "# jetsim sweep log\n" << buf << "time,input,output\n";
  for (std::size_t i = 0; i < log.input.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n",
                  static_cast<double>(i) * log.sample_time, log.input[i],
                  log.output[i]);
    os << buf;
  }
}

SweepLog read_sweep_log(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  SweepLog log;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("sample_time");
      if (pos != std::string::npos) {
        const auto eq = line.find('=', pos);
        if (eq != std::string::npos)
          log.sample_time = std::stod(line.substr(eq + 1));
      }
      continue;
    }
    if (line.rfind("time,", 0) == 0) continue;  // column header
    double t, u, y;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &u, &y) != 3)
      throw std::runtime_error("sweep log: malformed row: " + line);
    log.input.push_back(u);
    log.output.push_back(y);
  }
  if (log.sample_time <= 0.0)
    throw std::runtime_error("sweep log: missing sample_time header");
  return log;
}

}  // namespace jetsim::sysid
