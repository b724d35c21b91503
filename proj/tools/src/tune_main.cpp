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

// Gain-region search for the shipped default gain sets. Sweeps candidate
// cascade gains over the quadrotor roll plant and reports those that
// satisfy the qualitative delay/robustness regime the benchmarks pin
// down (see docs/tuning.md). Developer tool, not installed.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "jetsim/bench.hpp"

using jetsim::bench::DoubletSpec;
using jetsim::bench::ExperimentRecord;
using jetsim::bench::GainConfig;
using jetsim::bench::Scenario;
using jetsim::bench::Variant;

namespace {

struct Candidate {
  double att_kp, kp, ki, kd, obs_pole;
};

struct Outcome {
  bool ok = false;
  int score = 0;        // satisfied requirements
  double margin = 0.0;  // payload-degradation separation
  std::string detail;
};

Scenario base_scenario(const Candidate& c) {
  Scenario s;
  s.plant = jetsim::bench::PlantKind::kQuadRoll;
  GainConfig g;
  g.attitude.kp = Eigen::Vector3d::Constant(c.att_kp);
  for (auto& r : g.rate) {
    r.kp = c.kp;
    r.ki = c.ki;
    r.kd = c.kd;
    r.integrator_limit = 0.5;
    r.output_limit = 1.0;
    r.derivative_cutoff_hz = 30.0;
  }
  s.gains = g;
  s.observer_pole = c.obs_pole;
  return s;
}

ExperimentRecord track(const Candidate& c, Variant v, int h, double payload) {
  Scenario s = base_scenario(c);
  s.variant = v;
  s.added_delay = h;
  s.payload_fraction = payload;
  DoubletSpec d;
  d.amplitude = 15.0 * std::numbers::pi / 180.0;
  return jetsim::bench::doublet_tracking(s, d);
}

ExperimentRecord dist(const Candidate& c, Variant v, int h, double payload) {
  Scenario s = base_scenario(c);
  s.variant = v;
  s.added_delay = h;
  s.payload_fraction = payload;
  s.disturbance.amplitude = 0.1;
  s.disturbance.start_s = 0.5;
  return jetsim::bench::disturbance_rejection(s);
}

Outcome evaluate(const Candidate& c) {
  Outcome out;
  const auto stable = [](const ExperimentRecord& r) {
    return r.metrics.stable;
  };

  const auto b5 = track(c, Variant::kBaseline, 5, 0.0);
  const auto b10 = track(c, Variant::kBaseline, 10, 0.0);
  const auto s25 = track(c, Variant::kSmith, 25, 0.0);
  const auto st5 = track(c, Variant::kState, 5, 0.0);
  const auto st10 = track(c, Variant::kState, 10, 0.0);
  const auto st25 = track(c, Variant::kState, 25, 0.0);

  const auto db5 = dist(c, Variant::kBaseline, 5, 0.0);
  const auto ds5 = dist(c, Variant::kSmith, 5, 0.0);
  const auto dst5 = dist(c, Variant::kState, 5, 0.0);
  const auto db10 = dist(c, Variant::kBaseline, 10, 0.0);
  const auto ds10 = dist(c, Variant::kSmith, 10, 0.0);
  const auto dst10 = dist(c, Variant::kState, 10, 0.0);

  const auto ds10p = dist(c, Variant::kSmith, 10, 0.4);
  const auto dst5p = dist(c, Variant::kState, 5, 0.4);
  const auto dst10p = dist(c, Variant::kState, 10, 0.4);
  const auto dst25p = dist(c, Variant::kState, 25, 0.4);
  const auto ds25p = dist(c, Variant::kSmith, 25, 0.4);

  double smith_deg = 0.0, state_deg = 0.0;
  if (stable(ds10) && stable(ds10p) && stable(dst5) && stable(dst5p)) {
    smith_deg = (ds10p.metrics.rmse - ds10.metrics.rmse) / ds10.metrics.rmse;
    state_deg = (dst5p.metrics.rmse - dst5.metrics.rmse) / dst5.metrics.rmse;
  }

  const bool req[] = {
      stable(b5),
      !stable(b10),
      stable(s25),
      stable(st5),
      stable(st10),
      !stable(st25),
      stable(db5) && stable(ds5) && stable(dst5) &&
          ds5.metrics.rmse < dst5.metrics.rmse &&
          dst5.metrics.rmse < db5.metrics.rmse,
      stable(db5) && ds5.metrics.mae < dst5.metrics.mae &&
          dst5.metrics.mae < db5.metrics.mae,
      !stable(db10),
      stable(ds10) && stable(dst10) &&
          ds10.metrics.rmse < dst10.metrics.rmse,
      stable(ds10p) && stable(dst5p) && smith_deg < state_deg,
      !stable(dst25p) && stable(ds25p),  // mismatch regime at h = 25
  };

  out.score = 0;
  out.ok = true;
  for (bool r : req) {
    out.score += r ? 1 : 0;
    out.ok = out.ok && r;
  }
  // Prefer the regime where the payload genuinely hurts the state
  // predictor (positive degradation) and hardly moves the Smith loop.
  out.margin = state_deg - smith_deg;
  if (state_deg > 0.0) out.margin += 1.0;
  if (!stable(dst10p)) out.margin += 0.5;

  char buf[512];
  std::snprintf(
      buf, sizeof(buf),
      "b5:%d b10:%d s25:%d st5:%d st10:%d st25:%d | d5 rmse b/s/st "
      "%.3f/%.3f/%.3f mae %.2f/%.2f/%.2f | d10 b:%d s/st %.3f/%.3f | "
      "pay s10 %+.1f%% st5 %+.1f%% st10p:%d st25p:%d",
      stable(b5), stable(b10), stable(s25), stable(st5), stable(st10),
      stable(st25), db5.metrics.rmse, ds5.metrics.rmse, dst5.metrics.rmse,
      db5.metrics.mae, ds5.metrics.mae, dst5.metrics.mae, stable(db10),
      ds10.metrics.rmse, dst10.metrics.rmse, smith_deg * 100.0,
      state_deg * 100.0, stable(dst10p), stable(dst25p));
  out.detail = buf;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 7 && std::string(argv[1]) == "-p") {
    // Probe one candidate in detail.
    const Candidate c{std::atof(argv[2]), std::atof(argv[3]),
                      std::atof(argv[4]), std::atof(argv[5]),
                      std::atof(argv[6])};
    const Outcome o = evaluate(c);
    std::printf("%s\n", o.detail.c_str());
    for (int h : {5, 10, 25}) {
      for (auto v : {Variant::kBaseline, Variant::kSmith, Variant::kState}) {
        const auto r = track(c, v, h, 0.0);
        const auto rp = track(c, v, h, 0.4);
        std::printf(
            "track %-8s h=%2d: stable=%d rmse=%.4f mae=%.4f ovs=%.1f%% "
            "settle=%.3f | payload: stable=%d rmse=%.4f\n",
            jetsim::bench::to_string(v).c_str(), h, r.metrics.stable,
            r.metrics.rmse, r.metrics.mae,
            r.metrics.overshoot_pct.value_or(-1.0),
            r.metrics.settling_time_s.value_or(-1.0), rp.metrics.stable,
            rp.metrics.rmse);
      }
    }
    return 0;
  }
  const bool verbose = argc > 1 && std::string(argv[1]) == "-v";
  const std::vector<double> att_kps = {3.0, 4.0, 6.0, 8.0};
  const std::vector<double> kps = {0.005, 0.01, 0.02, 0.03, 0.05, 0.08};
  const std::vector<double> kis = {0.2, 0.5, 1.0, 2.0, 4.0, 8.0};
  const std::vector<double> kds = {0.0, 0.0005, 0.001};
  const std::vector<double> poles = {0.80, 0.85, 0.90};

  int found = 0;
  int best_score = 0;
  double best_margin = -1e9;
  Candidate best{};
  std::string best_detail;
  for (double att : att_kps)
    for (double kp : kps)
      for (double ki : kis)
        for (double kd : kds)
          for (double p : poles) {
            const Candidate c{att, kp, ki, kd, p};
            Outcome o;
            try {
              o = evaluate(c);
            } catch (const std::exception& e) {
              if (verbose)
                std::printf("ERR att=%.2f kp=%.4f ki=%.3f kd=%.4f pole=%.2f: %s\n",
                            c.att_kp, c.kp, c.ki, c.kd, c.obs_pole, e.what());
              continue;
            }
            if (o.score > best_score ||
                (o.ok && o.margin > best_margin)) {
              best_score = o.score;
              best = c;
              best_detail = o.detail;
              if (o.ok) best_margin = o.margin;
            }
            if (o.ok) {
              ++found;
              std::printf(
                  "OK  att=%.2f kp=%.4f ki=%.3f kd=%.4f pole=%.2f  margin=%.1f%%  %s\n",
                  c.att_kp, c.kp, c.ki, c.kd, c.obs_pole, o.margin * 100.0,
                  o.detail.c_str());
            } else if (verbose) {
              std::printf("..%2d att=%.2f kp=%.4f ki=%.3f kd=%.4f pole=%.2f  %s\n",
                          o.score, c.att_kp, c.kp, c.ki, c.kd, c.obs_pole,
                          o.detail.c_str());
            }
          }
  std::printf(
      "feasible: %d\nbest score %d: att=%.2f kp=%.4f ki=%.3f kd=%.4f pole=%.2f\n  %s\n",
      found, best_score, best.att_kp, best.kp, best.ki, best.kd, best.obs_pole,
      best_detail.c_str());
  return 0;
}
