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

#include "jetsim/bench.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "jetsim/model_io.hpp"
#include "jetsim/models.hpp"

namespace jetsim::bench {
namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

// Deterministic standard normal (Box-Muller on mt19937_64), independent
// of the standard library's distribution implementation.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}
  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

 private:
  double uniform() {
    return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
  }
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Tracks how long a divergence condition has been continuously true.
class DivergenceDetector {
 public:
  DivergenceDetector(double sustain_s, double dt)
      : needed_(static_cast<int>(std::ceil(sustain_s / dt))) {}

  // Returns true once the condition has held for the sustain window.
  bool update(bool diverged_now) {
    count_ = diverged_now ? count_ + 1 : 0;
    return count_ >= std::max(needed_, 1);
  }

 private:
  int needed_;
  int count_ = 0;
};

struct LoopComponents {
  ctl::CascadeController controller;
  lti::DelayLine<double> injected_delay;
};

ctl::CascadeController make_controller(
    const Scenario& scenario, const GainConfig& gains, double dt,
    const lti::DelayedTransferFunction& nominal_total) {
  ctl::CascadeController controller(gains.attitude, gains.rate, dt);
  switch (scenario.variant) {
    case Variant::kBaseline:
      break;
    case Variant::kSmith:
      controller.attach_smith(pred::SmithPredictor(nominal_total));
      break;
    case Variant::kState: {
      const int horizon = nominal_total.delay_samples();
      std::optional<pred::StatePredictor> sp;
      if (scenario.plant == PlantKind::kQuadRoll) {
        sp.emplace(models::quad_roll_ss(), horizon);
      } else {
        const lti::DelayedTransferFunction free(
            nominal_total.numerator(), nominal_total.denominator(), 0, dt);
        if (free.order() != 2)
          throw std::invalid_argument(
              "state-predictor variant needs a second-order nominal model");
        sp.emplace(lti::to_state_space(free), horizon);
      }
      controller.attach_state(
          std::move(*sp),
          pred::LuenbergerObserver(
              pred::ObserverGains::from_discrete_poles(
                  scenario.observer_pole, scenario.observer_pole, dt),
              dt));
      break;
    }
  }
  return controller;
}

void finalize_metrics(const Scenario& scenario, ExperimentRecord& rec) {
  const double t_end = scenario.metrics_end_s > 0.0 ? scenario.metrics_end_s
                                                    : scenario.duration_s;
  double sum_sq = 0.0;
  double max_abs = 0.0;
  std::size_t n = 0;
  const bool on_rate = scenario.metrics_on_rate || scenario.rate_loop_only;
  for (std::size_t i = 0; i < rec.time.size(); ++i) {
    if (rec.time[i] < scenario.metrics_start_s || rec.time[i] > t_end) continue;
    const double e = on_rate
                         ? rec.rate_setpoint[i] - rec.rate_measurement[i]
                         : rec.setpoint[i] - rec.measurement[i];
    sum_sq += e * e;
    max_abs = std::max(max_abs, std::abs(e));
    ++n;
  }
  rec.metrics.rmse = n ? std::sqrt(sum_sq / static_cast<double>(n)) : 0.0;
  rec.metrics.mae = max_abs;
  rec.metrics.stable = !rec.unstable;

  // Overshoot and settling over the positive doublet phase.
  const DoubletSpec& sp = scenario.setpoint;
  if (sp.amplitude > 0.0 && !scenario.rate_loop_only) {
    const double t0 = sp.start_s;
    const double t1 = sp.start_s + sp.positive_s;
    double peak = -1e300;
    double settle = 0.0;
    bool seen = false;
    for (std::size_t i = 0; i < rec.time.size(); ++i) {
      if (rec.time[i] < t0 || rec.time[i] >= t1) continue;
      seen = true;
      peak = std::max(peak, rec.measurement[i]);
      if (std::abs(rec.measurement[i] - sp.amplitude) > 0.05 * sp.amplitude)
        settle = rec.time[i] - t0 + rec.sample_time;
    }
    if (seen) {
      rec.metrics.overshoot_pct =
          std::max(0.0, (peak - sp.amplitude) / sp.amplitude * 100.0);
      rec.metrics.settling_time_s = settle;
    }
  }
}

ExperimentRecord run_quad(const Scenario& scenario) {
  const lti::DelayedTransferFunction nominal =
      scenario.plant == PlantKind::kCustomTf ? *scenario.custom_plant
                                             : models::quad_roll_tf();
  const double dt = nominal.sample_time();
  const GainConfig gains = scenario.gains ? *scenario.gains
                                          : quad_default_gains();

  // Plant truth: nominal dynamics with the control-effectiveness gain
  // scaled down by the payload; the predictors keep the nominal model.
  std::vector<double> num = nominal.numerator();
  for (double& c : num) c /= 1.0 + scenario.payload_fraction;
  lti::TfSimulator plant(lti::DelayedTransferFunction(
      num, nominal.denominator(), nominal.delay_samples(), dt));

  const lti::DelayedTransferFunction nominal_total(
      nominal.numerator(), nominal.denominator(),
      nominal.delay_samples() + scenario.added_delay, dt);
  ctl::CascadeController controller =
      make_controller(scenario, gains, dt, nominal_total);
  lti::DelayLine<double> injected(
      static_cast<std::size_t>(scenario.added_delay));
  NormalSampler noise(scenario.seed);

  ExperimentRecord rec;
  rec.name = scenario.name;
  rec.plant = scenario.plant;
  rec.variant = scenario.variant;
  rec.added_delay = scenario.added_delay;
  rec.payload_fraction = scenario.payload_fraction;
  rec.sample_time = dt;

  const std::size_t n =
      static_cast<std::size_t>(std::llround(scenario.duration_s / dt));
  DivergenceDetector detector(scenario.sustain_s, dt);

  double omega = 0.0;  // plant output available to the controller
  double phi = 0.0;    // integrated attitude
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double y_meas =
        omega + scenario.measurement_noise * (scenario.measurement_noise > 0.0
                                                  ? noise()
                                                  : 0.0);
    double tracked_sp = 0.0;
    Eigen::Vector3d u;
    if (scenario.rate_loop_only) {
      tracked_sp = scenario.setpoint.value_at(t);
      u = controller.step_rate({tracked_sp, 0.0, 0.0}, {y_meas, 0.0, 0.0});
    } else {
      tracked_sp = scenario.setpoint.value_at(t);
      const ctl::Quaternion q_sp =
          ctl::Quaternion::from_euler(tracked_sp, 0.0, 0.0);
      const ctl::Quaternion q = ctl::Quaternion::from_euler(phi, 0.0, 0.0);
      u = controller.step(q_sp, q, {y_meas, 0.0, 0.0});
    }
    const double d = scenario.disturbance.value_at(t);
    const double u_delayed = injected.push(u.x());

    rec.time.push_back(t);
    rec.setpoint.push_back(tracked_sp);
    rec.measurement.push_back(scenario.rate_loop_only ? omega : phi);
    rec.rate_setpoint.push_back(controller.last_rate_setpoint().x());
    rec.rate_measurement.push_back(omega);
    rec.prediction.push_back(controller.last_roll_feedback());
    rec.command.push_back(u.x());
    rec.disturbance.push_back(d);

    const double omega_next = plant.step(u_delayed + d);
    phi += dt * omega;
    omega = omega_next;

    const bool diverged =
        !std::isfinite(omega) || std::abs(omega) > scenario.rate_limit ||
        (!scenario.rate_loop_only &&
         std::abs(scenario.setpoint.value_at(t) - phi) >
             scenario.attitude_error_limit);
    if (!std::isfinite(omega) || detector.update(diverged)) {
      rec.unstable = true;
      rec.unstable_at_s = t;
      break;
    }
  }
  finalize_metrics(scenario, rec);
  return rec;
}

ExperimentRecord run_hexjet(const Scenario& scenario) {
  const double dt = models::kJetSampleTime;
  const GainConfig gains = scenario.gains ? *scenario.gains
                                          : hexjet_default_gains();
  veh::HexJetGeometry geom;  // nominal; the controller never sees the payload
  veh::ActuatorDynamicsConfig actuators;
  veh::HexJetModel model(geom, actuators, dt, scenario.payload_fraction);

  const double hover_thrust = geom.mass * veh::kGravity;
  const double hover_f = hover_thrust / 6.0;
  const double tilt_span = 0.5 * geom.tilt_limit;
  const double mx_per_u =
      6.0 * geom.ly * geom.max_engine_thrust * scenario.roll_command_span;
  const double my_per_u = 6.0 * geom.lz * hover_f * std::sin(tilt_span);
  const double mz_per_u = 6.0 * geom.ly * hover_f * std::sin(tilt_span);

  lti::DelayedTransferFunction roll_model =
      model.roll_rate_model(scenario.roll_command_span);
  const lti::DelayedTransferFunction nominal_total(
      roll_model.numerator(), roll_model.denominator(),
      roll_model.delay_samples() + scenario.added_delay, dt);
  ctl::CascadeController controller =
      make_controller(scenario, gains, dt, nominal_total);
  lti::DelayLine<double> injected(
      static_cast<std::size_t>(scenario.added_delay));
  NormalSampler noise(scenario.seed);

  // Spool the engines to hover trim before the recorded window.
  const veh::AllocationResult hover_cmd =
      veh::allocate({hover_thrust, Eigen::Vector3d::Zero()}, geom);
  const int trim_steps = static_cast<int>(std::llround(2.0 / dt));
  for (int k = 0; k < trim_steps; ++k) model.step(hover_cmd);

  ExperimentRecord rec;
  rec.name = scenario.name;
  rec.plant = scenario.plant;
  rec.variant = scenario.variant;
  rec.added_delay = scenario.added_delay;
  rec.payload_fraction = scenario.payload_fraction;
  rec.sample_time = dt;

  const std::size_t n =
      static_cast<std::size_t>(std::llround(scenario.duration_s / dt));
  DivergenceDetector detector(scenario.sustain_s, dt);

  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const veh::VehicleState& state = model.state();
    const double phi = state.attitude.euler_angles().x();
    const double phi_sp = scenario.setpoint.value_at(t);

    Eigen::Vector3d rate_meas = state.body_rate;
    if (scenario.measurement_noise > 0.0)
      rate_meas.x() += scenario.measurement_noise * noise();

    Eigen::Vector3d u;
    if (scenario.rate_loop_only) {
      u = controller.step_rate({phi_sp, 0.0, 0.0}, rate_meas);
    } else {
      const ctl::Quaternion q_sp =
          ctl::Quaternion::from_euler(phi_sp, 0.0, 0.0);
      u = controller.step(q_sp, state.attitude, rate_meas);
    }
    const double d = scenario.disturbance.value_at(t);
    const double u_roll = injected.push(u.x()) + d;

    rec.time.push_back(t);
    rec.setpoint.push_back(phi_sp);
    rec.measurement.push_back(scenario.rate_loop_only ? state.body_rate.x()
                                                      : phi);
    rec.rate_setpoint.push_back(controller.last_rate_setpoint().x());
    rec.rate_measurement.push_back(state.body_rate.x());
    rec.prediction.push_back(controller.last_roll_feedback());
    rec.command.push_back(u.x());
    rec.disturbance.push_back(d);

    veh::AllocationRequest request;
    request.thrust_up = hover_thrust;
    request.torque = {u_roll * mx_per_u, u.y() * my_per_u, u.z() * mz_per_u};
    bool aborted = false;
    try {
      model.step(veh::allocate(request, geom));
    } catch (const std::runtime_error&) {
      aborted = true;  // non-finite dynamics
    }
    const bool diverged =
        aborted || model.state().body_rate.norm() > scenario.rate_limit ||
        std::abs(phi_sp - model.state().attitude.euler_angles().x()) >
            scenario.attitude_error_limit;
    if (aborted || detector.update(diverged)) {
      rec.unstable = true;
      rec.unstable_at_s = t;
      break;
    }
  }
  finalize_metrics(scenario, rec);
  return rec;
}

}  // namespace

std::string to_string(PlantKind kind) {
  switch (kind) {
    case PlantKind::kQuadRoll: return "quad_roll";
    case PlantKind::kHexJet: return "hexjet";
    case PlantKind::kCustomTf: return "tf";
  }
  return "?";
}

std::string to_string(Variant variant) {
  switch (variant) {
    case Variant::kBaseline: return "baseline";
    case Variant::kSmith: return "smith";
    case Variant::kState: return "state";
  }
  return "?";
}

PlantKind plant_kind_from_string(const std::string& s) {
  if (s == "quad_roll") return PlantKind::kQuadRoll;
  if (s == "hexjet") return PlantKind::kHexJet;
  if (s == "tf") return PlantKind::kCustomTf;
  throw std::invalid_argument("unknown plant kind: " + s);
}

Variant variant_from_string(const std::string& s) {
  if (s == "baseline") return Variant::kBaseline;
  if (s == "smith") return Variant::kSmith;
  if (s == "state") return Variant::kState;
  throw std::invalid_argument("unknown controller variant: " + s);
}

double DoubletSpec::value_at(double t) const {
  if (t < start_s) return 0.0;
  if (t < start_s + positive_s) return amplitude;
  if (t < start_s + positive_s + negative_s) return -amplitude;
  return 0.0;
}

void DoubletSpec::validate() const {
  if (!(positive_s > 0.0) || !(negative_s > 0.0))
    throw std::invalid_argument("doublet: phase durations must be > 0");
  if (start_s < 0.0) throw std::invalid_argument("doublet: negative start");
  if (!std::isfinite(amplitude))
    throw std::invalid_argument("doublet: non-finite amplitude");
}

void Scenario::validate() const {
  if (!(duration_s > 0.0))
    throw std::invalid_argument("scenario: duration must be > 0");
  if (added_delay < 0)
    throw std::invalid_argument("scenario: negative added delay");
  if (payload_fraction < 0.0)
    throw std::invalid_argument("scenario: negative payload fraction");
  if (plant == PlantKind::kCustomTf && !custom_plant)
    throw std::invalid_argument("scenario: custom plant not provided");
  setpoint.validate();
  disturbance.validate();
  if (!(observer_pole > 0.0 && observer_pole < 1.0) &&
      variant == Variant::kState)
    throw std::invalid_argument("scenario: observer pole outside (0, 1)");
}

double Scenario::sample_time() const {
  switch (plant) {
    case PlantKind::kQuadRoll: return models::kQuadSampleTime;
    case PlantKind::kHexJet: return models::kJetSampleTime;
    case PlantKind::kCustomTf: return custom_plant->sample_time();
  }
  return models::kQuadSampleTime;
}

ExperimentRecord run_scenario(const Scenario& scenario) {
  scenario.validate();
  return scenario.plant == PlantKind::kHexJet ? run_hexjet(scenario)
                                              : run_quad(scenario);
}

ExperimentRecord doublet_tracking(Scenario scenario,
                                  const DoubletSpec& doublet) {
  scenario.setpoint = doublet;
  scenario.rate_loop_only = false;
  return run_scenario(scenario);
}

ExperimentRecord disturbance_rejection(Scenario scenario) {
  // The attitude loop stays closed (the vehicle is flying); the metrics
  // are the rate-loop tracking error.
  scenario.rate_loop_only = false;
  scenario.metrics_on_rate = true;
  scenario.setpoint.amplitude = 0.0;
  scenario.metrics_start_s = scenario.disturbance.start_s;
  scenario.metrics_end_s = scenario.disturbance.start_s +
                           scenario.disturbance.positive_s +
                           scenario.disturbance.negative_s + 1.0;
  if (scenario.duration_s < scenario.metrics_end_s)
    scenario.duration_s = scenario.metrics_end_s;
  return run_scenario(scenario);
}

ExperimentRecord payload_robustness(Scenario scenario,
                                    double payload_fraction) {
  scenario.payload_fraction = payload_fraction;
  return run_scenario(scenario);
}

std::vector<ExperimentRecord> run_all(const std::vector<Scenario>& scenarios,
                                      unsigned jobs) {
  std::vector<ExperimentRecord> results(scenarios.size());
  if (scenarios.empty()) return results;
  unsigned n_threads = jobs ? jobs : std::thread::hardware_concurrency();
  n_threads = std::max(1u, std::min<unsigned>(
                               n_threads,
                               static_cast<unsigned>(scenarios.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(scenarios.size());
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= scenarios.size()) return;
      try {
        results[i] = run_scenario(scenarios[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (!errors[i].empty())
      throw std::runtime_error("scenario '" + scenarios[i].name +
                               "': " + errors[i]);
  return results;
}

namespace {

void require_comparable(const std::vector<ExperimentRecord>& records) {
  if (records.size() < 2)
    throw std::invalid_argument("compare: need at least two records");
  for (const auto& r : records)
    if (r.plant != records.front().plant ||
        r.sample_time != records.front().sample_time)
      throw std::invalid_argument("compare: inconsistent scenario axes");
}

std::string delta_pct(double value, double base) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%+.1f%%", (value - base) / base * 100.0);
  return buf;
}

}  // namespace

std::string compare_table_text(const std::vector<ExperimentRecord>& records,
                               std::size_t baseline_index) {
  require_comparable(records);
  const ExperimentRecord& base = records.at(baseline_index);
  std::ostringstream os;
  os << "metric";
  for (const auto& r : records) os << '\t' << r.name;
  os << '\n';
  const auto row = [&](const char* name, auto getter) {
    os << name;
    for (std::size_t i = 0; i < records.size(); ++i) {
      os << '\t';
      if (!records[i].metrics.stable) {
        os << "unstable";
        continue;
      }
      const double v = getter(records[i]);
      os << fmt4(v);
      if (i != baseline_index && base.metrics.stable)
        os << " (" << delta_pct(v, getter(base)) << ")";
    }
    os << '\n';
  };
  row("RMSE", [](const ExperimentRecord& r) { return r.metrics.rmse; });
  row("MAE", [](const ExperimentRecord& r) { return r.metrics.mae; });
  return os.str();
}

std::string compare_table_csv(const std::vector<ExperimentRecord>& records,
                              std::size_t baseline_index) {
  require_comparable(records);
  const ExperimentRecord& base = records.at(baseline_index);
  std::ostringstream os;
  os << "name,variant,added_delay,payload_fraction,stable,rmse,mae,"
        "rmse_delta_pct,mae_delta_pct\n";
  for (const auto& r : records) {
    os << r.name << ',' << to_string(r.variant) << ',' << r.added_delay << ','
       << fmt17(r.payload_fraction) << ',' << (r.metrics.stable ? 1 : 0);
    if (r.metrics.stable) {
      os << ',' << fmt17(r.metrics.rmse) << ',' << fmt17(r.metrics.mae);
      if (base.metrics.stable) {
        os << ','
           << fmt17((r.metrics.rmse - base.metrics.rmse) / base.metrics.rmse *
                    100.0)
           << ','
           << fmt17((r.metrics.mae - base.metrics.mae) / base.metrics.mae *
                    100.0);
      } else {
        os << ",,";
      }
    } else {
      os << ",,,,";
    }
    os << '\n';
  }
  return os.str();
}

void write_trace_csv(const std::filesystem::path& path,
                     const ExperimentRecord& record) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << "time,setpoint,measurement,rate_setpoint,rate_measurement,prediction,"
        "command,disturbance\n";
  for (std::size_t i = 0; i < record.time.size(); ++i) {
    os << fmt17(record.time[i]) << ',' << fmt17(record.setpoint[i]) << ','
       << fmt17(record.measurement[i]) << ',' << fmt17(record.rate_setpoint[i])
       << ',' << fmt17(record.rate_measurement[i]) << ','
       << fmt17(record.prediction[i]) << ',' << fmt17(record.command[i]) << ','
       << fmt17(record.disturbance[i]) << '\n';
  }
}

std::string metrics_json_line(const ExperimentRecord& record) {
  std::ostringstream os;
  os << "{\"name\":\"" << record.name << "\",\"plant\":\""
     << to_string(record.plant) << "\",\"variant\":\""
     << to_string(record.variant) << "\",\"added_delay\":" << record.added_delay
     << ",\"payload_fraction\":" << fmt17(record.payload_fraction)
     << ",\"stable\":" << (record.metrics.stable ? "true" : "false")
     << ",\"rmse\":" << fmt17(record.metrics.rmse)
     << ",\"mae\":" << fmt17(record.metrics.mae);
  os << ",\"overshoot_pct\":";
  if (record.metrics.overshoot_pct)
    os << fmt17(*record.metrics.overshoot_pct);
  else
    os << "null";
  os << ",\"settling_time_s\":";
  if (record.metrics.settling_time_s)
    os << fmt17(*record.metrics.settling_time_s);
  else
    os << "null";
  os << ",\"unstable_at_s\":";
  if (record.unstable)
    os << fmt17(record.unstable_at_s);
  else
    os << "null";
  os << "}";
  return os.str();
}

void write_metrics_jsonl(const std::filesystem::path& path,
                         const std::vector<ExperimentRecord>& records) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  for (const auto& r : records) os << metrics_json_line(r) << '\n';
}

namespace {

constexpr std::string_view kScenarioKeys[] = {
    "plant.kind",          "plant.model_file",    "plant.payload",
    "run.variants",        "run.delays",          "run.payloads",
    "setpoint.amplitude_deg", "setpoint.amplitude", "setpoint.start_s",
    "setpoint.positive_s", "setpoint.negative_s", "disturbance.amplitude",
    "disturbance.start_s", "disturbance.positive_s", "disturbance.negative_s",
    "sim.duration_s",      "sim.seed",            "sim.noise",
    "sim.rate_loop_only",  "controller.attitude_kp", "controller.rate_kp",
    "controller.rate_ki",  "controller.rate_kd",  "controller.integrator_limit",
    "controller.output_limit", "controller.derivative_cutoff_hz",
    "observer.pole",       "roll.command_span",
};

GainConfig gains_from_config(const cfg::Config& config, GainConfig base) {
  const double att = config.get_double("controller.attitude_kp",
                                       base.attitude.kp.x());
  base.attitude.kp = Eigen::Vector3d::Constant(att);
  for (auto& g : base.rate) {
    g.kp = config.get_double("controller.rate_kp", g.kp);
    g.ki = config.get_double("controller.rate_ki", g.ki);
    g.kd = config.get_double("controller.rate_kd", g.kd);
    g.integrator_limit =
        config.get_double("controller.integrator_limit", g.integrator_limit);
    g.output_limit =
        config.get_double("controller.output_limit", g.output_limit);
    g.derivative_cutoff_hz = config.get_double(
        "controller.derivative_cutoff_hz", g.derivative_cutoff_hz);
  }
  return base;
}

}  // namespace

std::span<const std::string_view> scenario_config_keys() {
  return kScenarioKeys;
}

std::vector<Scenario> scenarios_from_config(const cfg::Config& config,
                                            const std::string& kind) {
  config.check_known_keys(kScenarioKeys);

  Scenario base;
  base.plant = plant_kind_from_string(config.get_string("plant.kind",
                                                        "quad_roll"));
  if (base.plant == PlantKind::kCustomTf)
    base.custom_plant =
        lti::read_model_file(config.require_string("plant.model_file"));
  base.payload_fraction = config.get_double("plant.payload", 0.0);
  base.gains = gains_from_config(
      config, base.plant == PlantKind::kHexJet ? hexjet_default_gains()
                                               : quad_default_gains());
  base.observer_pole = config.get_double("observer.pole", base.observer_pole);
  base.roll_command_span =
      config.get_double("roll.command_span", base.roll_command_span);
  base.seed = static_cast<std::uint64_t>(config.get_int("sim.seed", 1));
  base.measurement_noise = config.get_double("sim.noise", 0.0);

  const double default_step_deg =
      base.plant == PlantKind::kHexJet ? 10.0 : 15.0;
  DoubletSpec step;
  step.amplitude =
      config.has("setpoint.amplitude")
          ? config.get_double("setpoint.amplitude", 0.0)
          : config.get_double("setpoint.amplitude_deg", default_step_deg) *
                kPi / 180.0;
  step.start_s = config.get_double("setpoint.start_s", 0.2);
  step.positive_s = config.get_double("setpoint.positive_s", 0.5);
  step.negative_s = config.get_double("setpoint.negative_s", 0.5);

  DoubletSpec dist;
  dist.amplitude = config.get_double("disturbance.amplitude", 0.1);
  dist.start_s = config.get_double("disturbance.start_s", 0.5);
  dist.positive_s = config.get_double("disturbance.positive_s", 0.5);
  dist.negative_s = config.get_double("disturbance.negative_s", 0.5);

  std::vector<std::string> variants = config.get_string_list("run.variants");
  if (variants.empty()) variants = {"baseline", "smith", "state"};
  std::vector<double> delays = config.get_double_list("run.delays");
  if (delays.empty()) delays = {5.0, 10.0, 25.0};
  std::vector<double> payloads = config.get_double_list("run.payloads");
  if (payloads.empty()) payloads = {0.0, 0.4};

  std::vector<Scenario> out;
  const auto push = [&](Scenario s, const std::string& variant, int h,
                        std::optional<double> payload) {
    s.variant = variant_from_string(variant);
    s.added_delay = h;
    std::string name = variant + "_h" + std::to_string(h);
    if (payload) {
      s.payload_fraction = *payload;
      name += "_p" + std::to_string(static_cast<int>(*payload * 100.0));
    }
    s.name = name;
    out.push_back(std::move(s));
  };

  if (kind == "step") {
    base.setpoint = step;
    base.rate_loop_only = config.get_bool("sim.rate_loop_only", false);
    base.duration_s = config.get_double("sim.duration_s", 2.0);
    for (const auto& v : variants)
      for (double h : delays) push(base, v, static_cast<int>(h), std::nullopt);
  } else if (kind == "dist") {
    base.disturbance = dist;
    base.duration_s = config.get_double(
        "sim.duration_s",
        dist.start_s + dist.positive_s + dist.negative_s + 1.0);
    for (const auto& v : variants) {
      for (double h : delays) {
        Scenario s = base;
        s.metrics_on_rate = true;
        s.setpoint.amplitude = 0.0;
        s.metrics_start_s = dist.start_s;
        s.metrics_end_s = dist.start_s + dist.positive_s + dist.negative_s + 1.0;
        push(s, v, static_cast<int>(h), std::nullopt);
      }
    }
  } else if (kind == "payload") {
    base.disturbance = dist;
    base.duration_s = config.get_double(
        "sim.duration_s",
        dist.start_s + dist.positive_s + dist.negative_s + 1.0);
    for (const auto& v : variants) {
      for (double h : delays) {
        for (double p : payloads) {
          Scenario s = base;
          s.metrics_on_rate = true;
          s.setpoint.amplitude = 0.0;
          s.metrics_start_s = dist.start_s;
          s.metrics_end_s =
              dist.start_s + dist.positive_s + dist.negative_s + 1.0;
          push(s, v, static_cast<int>(h), p);
        }
      }
    }
  } else {
    throw std::invalid_argument("unknown scenario family: " + kind);
  }
  return out;
}

GainConfig quad_default_gains() {
  // Tuned against the quadrotor roll plant (rate-loop gain crossover
  // near 4 Hz, a few degrees of phase margin left at 5 added samples,
  // clearly negative at 10). Procedure and the feasibility sweep are in
  // docs/tuning.md.
  GainConfig g;
  g.attitude.kp = Eigen::Vector3d::Constant(12.0);
  for (auto& r : g.rate) {
    r.kp = 0.035;
    r.ki = 0.4;
    r.kd = 0.0;
    r.integrator_limit = 0.5;
    r.output_limit = 1.0;
    r.derivative_cutoff_hz = 30.0;
  }
  return g;
}

GainConfig hexjet_default_gains() {
  // Tuned for the delay-free roll-channel model (the loop the Smith
  // predictor exposes); running them against the raw 0.1 s actuator
  // delay loses the roll axis, as the flight results showed.
  GainConfig g;
  g.attitude.kp = Eigen::Vector3d::Constant(1.5);
  for (auto& r : g.rate) {
    r.kp = 0.3;
    r.ki = 0.1;
    r.kd = 0.0;
    r.integrator_limit = 0.5;
    r.output_limit = 1.0;
    r.derivative_cutoff_hz = 20.0;
  }
  return g;
}

}  // namespace jetsim::bench
