/*
 * Copyright (c) 2026 The SPCM Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "spcm/mission/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>

#include <fmt/format.h>

#include "spcm/error.hpp"
#include "spcm/metrics/pointing.hpp"
#include "spcm/mission/control.hpp"
#include "spcm/mission/guidance.hpp"
#include "spcm/mission/plant.hpp"
#include "spcm/sensors/sensors.hpp"
#include "spcm/sim/random.hpp"
#include "spcm/sim/schedule.hpp"

namespace spcm::mission {

using Eigen::Index;
using Eigen::Vector2d;
using Eigen::Vector3d;
using Eigen::Vector4d;
using Eigen::VectorXd;

const std::vector<std::string>& log_columns() {
  static const std::vector<std::string> cols = {
      "t",          "phase",
      "q_w",        "q_x",          "q_y",          "q_z",
      "rate_x",     "rate_y",       "rate_z",
      "att_err_x",  "att_err_y",    "att_err_z",
      "los_x",      "los_y",
      "est_err_x",  "est_err_y",    "est_err_z",
      "gyro_x",     "gyro_y",       "gyro_z",
      "str_valid",  "fgs_x",        "fgs_y",        "fgs_valid",
      "tau_cmd_x",  "tau_cmd_y",    "tau_cmd_z",
      "rw_torque_1", "rw_torque_2", "rw_torque_3",  "rw_torque_4",
      "rw_speed_1", "rw_speed_2",   "rw_speed_3",   "rw_speed_4",
      "rcs_tx",     "rcs_ty",       "rcs_tz",
      "fsm_cmd_tip", "fsm_cmd_tilt", "fsm_tip",     "fsm_tilt",
      "pma_fx",     "pma_fy",       "pma_fz",
      "dist_gg_x",  "dist_gg_y",    "dist_gg_z",
      "dist_srp_tx", "dist_srp_ty", "dist_srp_tz",
      "dist_sadm_1", "dist_sadm_2",
      "iso_rx",     "iso_ry",
      "h_x",        "h_y",          "h_z"};
  return cols;
}

double log_round(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, kLogDigits);
  double out = v;
  std::from_chars(buf, r.ptr, out);
  return out;
}

namespace {

std::uint64_t period(double rate, double dt) {
  const auto p = sim::commensurate_period(rate, dt);
  return p ? *p : 1;
}

/// Rolling attitude / LOS monitors restarted at each phase entry.
class Monitor {
public:
  Monitor(std::size_t window, int axes) : window_(window), axes_(axes) {}

  void reset() { buf_.clear(); }
  void push(const Eigen::VectorXd& e) {
    buf_.push_back(e.head(axes_));
    if (buf_.size() > window_) buf_.pop_front();
  }
  MonitorReading reading() const {
    MonitorReading m;
    if (buf_.empty()) return m;
    m.ape_now = buf_.back().norm();
    m.window_full = buf_.size() >= window_;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(axes_);
    for (const auto& e : buf_) {
      mean += e;
      m.ape_window = std::max(m.ape_window, e.norm());
    }
    mean /= static_cast<double>(buf_.size());
    for (const auto& e : buf_) m.rpe_window = std::max(m.rpe_window, (e - mean).norm());
    return m;
  }

private:
  std::size_t window_;
  int axes_;
  std::deque<Eigen::VectorXd> buf_;
};

/// Emits an event on the rising edge of a condition.
class Edge {
public:
  bool rise(bool now) {
    const bool r = now && !last_;
    last_ = now;
    return r;
  }

private:
  bool last_ = false;
};

struct ActivePulse {
  std::size_t thruster = 0;
  double start = 0.0, end = 0.0;  // absolute, s
  double force = 0.0;             // N
};

sensors::StarTrackerSpec quiet(sensors::StarTrackerSpec s) {
  s.noise_std.setZero();
  return s;
}
sensors::GyroSpec quiet(sensors::GyroSpec s) {
  s.noise_density = 0.0;
  s.bias_walk_density = 0.0;
  return s;
}
sensors::FgsSpec quiet(sensors::FgsSpec s) {
  s.noise_std = 0.0;
  return s;
}

}  // namespace

SimulationResult simulate(const Scenario& s, const SimulationOptions& options) {
  s.validate();
  SimulationResult res;
  const auto& sc = s.spacecraft;
  const double dt = s.solver.dt;
  const double t_total = options.duration.value_or(s.timeline.total);
  const auto steps = static_cast<std::uint64_t>(std::llround(t_total / dt));

  // Plant.
  const auto structure = build_structure(s);
  const auto wf = wheel_fidelity(s.fidelity);
  const auto pyramid = sc.wheels.pyramid();
  Plant plant(structure::assemble(structure, sc.theta), pyramid, wf);
  const auto& model = plant.model();
  const Eigen::Matrix3d inertia = model.composite_inertia();
  const Index ne = static_cast<Index>(plant.elastic_size());
  const std::size_t nu = plant.input_size();
  auto opt_input = [&](const std::string& n) -> std::optional<std::size_t> { return model.model.input_index(n); };
  const std::size_t in_hub = plant.input("hub_fx"), in_thr = plant.input("thr_fx");
  const auto in_sadm1 = opt_input("sadm1_torque"), in_sadm2 = opt_input("sadm2_torque");
  const std::size_t in_pma = plant.input("pma_fx");
  std::array<std::size_t, 4> in_wheel{};
  for (std::size_t k = 0; k < 4; ++k) in_wheel[k] = plant.input(structure::wheel_input_names(k).front());
  std::optional<Index> iso_pos;  // plant-state index of the payload isolator coordinates
  if (model.layout.payload_isolator) iso_pos = 10 + static_cast<Index>(*model.layout.payload_isolator) - 6;

  // Wheels and momentum bias.
  const Vector4d null_vec = pyramid.null_vector();
  const Vector4d speed0 = sc.wheels.bias_speed * null_vec / null_vec.cwiseAbs().maxCoeff();
  const double null_target = null_vec.dot(speed0);
  std::array<actuators::WheelState, 4> wheel_state{};
  for (std::size_t k = 0; k < 4; ++k) wheel_state[k].speed = speed0(static_cast<Index>(k));

  // RCS.
  const auto thrusters = sc.rcs.layout();
  std::vector<Eigen::Matrix<double, 6, 1>> unit_wrench;
  for (const auto& th : thrusters) unit_wrench.push_back(th.unit_wrench());
  const std::uint64_t pwm_steps = period(1.0 / sc.rcs.prototype.pwm_period, dt);
  std::vector<ActivePulse> pulses;

  // Optics.
  const auto telescope = optics::make_telescope(sc.optics.geometry);
  const auto sens = optics::los_sensitivity(telescope);
  const std::string fsm_name = telescope.elements[telescope.fsm_index()].name;
  Eigen::Matrix2d s_fsm;
  s_fsm.col(0) = sens.matrix.col(static_cast<Index>(sens.index(fsm_name + ".tip")));
  s_fsm.col(1) = sens.matrix.col(static_cast<Index>(sens.index(fsm_name + ".tilt")));
  Vector2d los_static = Vector2d::Zero();
  {
    std::vector<std::string> labels;
    VectorXd values(static_cast<Index>(sc.optics.misalignment.size()));
    for (std::size_t i = 0; i < sc.optics.misalignment.size(); ++i) {
      labels.push_back(sc.optics.misalignment[i].first);
      values(static_cast<Index>(i)) = sc.optics.misalignment[i].second;
    }
    if (!labels.empty()) los_static = optics::los_error(sens, labels, values);
  }

  // Sensors.
  const bool noisy = s.fidelity.sensor_noise;
  const auto str_spec = noisy ? sc.sensors.str : quiet(sc.sensors.str);
  const auto gc_spec = noisy ? sc.sensors.gyro_coarse : quiet(sc.sensors.gyro_coarse);
  const auto gf_spec = noisy ? sc.sensors.gyro_fine : quiet(sc.sensors.gyro_fine);
  const auto fgs_spec = noisy ? sc.sensors.fgs : quiet(sc.sensors.fgs);
  const std::uint64_t str_steps = period(str_spec.rate_hz, dt), gc_steps = period(gc_spec.rate_hz, dt),
                      gf_steps = period(gf_spec.rate_hz, dt), fgs_steps = period(fgs_spec.rate_hz, dt);
  const auto str_lag = static_cast<std::size_t>(std::llround(str_spec.latency / dt));
  const auto gc_lag = static_cast<std::size_t>(std::llround(gc_spec.latency / dt));
  const auto gf_lag = static_cast<std::size_t>(std::llround(gf_spec.latency / dt));
  const auto exposure = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(fgs_spec.exposure / dt)));
  sensors::History<sim::Quaternion> q_hist(str_lag + 1);
  sensors::History<Vector3d> w_hist(std::max({str_lag, gc_lag, gf_lag}) + 1);
  sensors::History<Vector2d> los_hist(exposure);
  sensors::GyroState gc_state, gf_state;
  sim::Rng rng_str(sim::derive_seed(s.seed, 1)), rng_gc(sim::derive_seed(s.seed, 2)),
      rng_gf(sim::derive_seed(s.seed, 3)), rng_fgs(sim::derive_seed(s.seed, 4));
  std::array<sim::Rng, 4> rng_wheel{sim::Rng(sim::derive_seed(s.seed, 10)), sim::Rng(sim::derive_seed(s.seed, 11)),
                                    sim::Rng(sim::derive_seed(s.seed, 12)), sim::Rng(sim::derive_seed(s.seed, 13))};

  // Control.
  const double ctrl_dt = 1.0 / s.control.rate;
  const std::uint64_t ctrl_steps = period(s.control.rate, dt);
  const std::uint64_t log_steps = period(s.solver.log_rate, dt);
  const SlewProfile profile(s.slew.initial, s.slew.target, s.slew.omega_max, s.slew.alpha_max);
  ModeState mode;
  int window = 0;
  AttitudeController ctrl(s.control.window[0].gains, inertia, ctrl_dt);
  FineLosController los_ctrl(s.control.los_integral_gain, sc.fsm.stroke, s_fsm, 1.0 / fgs_spec.rate_hz);
  actuators::SecondOrderActuator fsm(sc.fsm, 2, dt);
  actuators::SecondOrderActuator pma;
  const bool pma_used = std::any_of(s.control.window.begin(), s.control.window.end(), [](const PhaseSuite& p) { return p.pma; });
  if (pma_used) pma = actuators::SecondOrderActuator(sc.pma, 3, dt);
  Monitor mon_coarse(metrics::window_samples(s.timeline.req.window2, 1.0 / s.solver.log_rate), 3);
  Monitor mon_fine(metrics::window_samples(s.timeline.req.window3, 1.0 / s.solver.log_rate), 2);

  // Estimator state.
  sim::Quaternion q_est = s.slew.initial.normalized();
  Vector3d w_est = Vector3d::Zero();
  Vector3d gyro_last = Vector3d::Zero();
  sensors::StrMeasurement str_last;
  sensors::FgsMeasurement fgs_last;
  Vector3d tau_cmd = Vector3d::Zero();
  Vector4d rotor_cmd = Vector4d::Zero();
  Vector2d tilt_cmd = Vector2d::Zero();
  Vector3d pma_cmd = Vector3d::Zero();

  Edge e_str, e_fgs, e_aw, e_clip[4], e_sat[4], e_mib, e_fsm;
  auto event = [&](double t, std::string type, std::string detail) {
    res.events.push_back({t, std::move(type), std::move(detail)});
  };

  VectorXd x = plant.initial_state(s.slew.initial, speed0);
  SignalLog log(log_columns(), s.solver.log_rate);
  log.reserve(steps / log_steps + 1);
  std::vector<double> row(log_columns().size());
  VectorXd u(static_cast<Index>(nu));
  event(0.0, "mode_transition", fmt::format("start {}", phase_name(mode.phase)));

  for (std::uint64_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const sim::Quaternion q = Plant::attitude(x);
    const Vector3d w = Plant::rate(x);
    const ReferenceState ref = profile.sample(t);
    const Vector3d att_err = sim::attitude_error(q, ref.q);
    Vector2d iso = Vector2d::Zero();
    if (iso_pos) iso = x.segment<2>(*iso_pos + 3);
    const Vector2d los = att_err.head<2>() + iso + s_fsm * fsm.output() + los_static;
    q_hist.push(q);
    w_hist.push(w);
    los_hist.push(los);

    const PhaseSuite& suite = s.control.window[static_cast<std::size_t>(window)];

    // Sensors run on their own clocks whether or not the phase uses them.
    if (k % str_steps == 0) {
      str_last = sensors::str_measure(str_spec, q_hist.ago(str_lag), w_hist.ago(str_lag), rng_str);
      if (suite.str) {
        if (str_last.valid) {
          sim::Quaternion m = str_last.q;
          if (m.dot(q_est) < 0.0) m.coeffs() = -m.coeffs();
          q_est = q_est.slerp(sc.sensors.str_blend, m).normalized();
        }
        if (e_str.rise(!str_last.valid)) event(t, "str_invalid", "rate above the tracking limit");
      }
    }
    if (k % gc_steps == 0) {
      const Vector3d m = sensors::gyro_measure(gc_spec, gc_state, w_hist.ago(gc_lag), 1.0 / gc_spec.rate_hz, rng_gc);
      if (suite.gyro_coarse) {
        q_est = sim::quat_propagate(q_est, m, 1.0 / gc_spec.rate_hz);
        w_est = gyro_last = m;
      }
    }
    if (k % gf_steps == 0) {
      const Vector3d m = sensors::gyro_measure(gf_spec, gf_state, w_hist.ago(gf_lag), 1.0 / gf_spec.rate_hz, rng_gf);
      if (suite.gyro_fine) {
        q_est = sim::quat_propagate(q_est, m, 1.0 / gf_spec.rate_hz);
        w_est = gyro_last = m;
      }
    }
    const bool fgs_tick = k % fgs_steps == 0;
    if (fgs_tick) {
      const auto samples = los_hist.last(exposure);
      fgs_last = sensors::fgs_measure(fgs_spec, samples, rng_fgs);
    }

    // Supervisor and attitude control.
    if (k % ctrl_steps == 0) {
      ModeInputs in;
      in.coarse = mon_coarse.reading();
      in.fine = mon_fine.reading();
      in.slew_complete = t >= profile.duration();
      const Phase before = mode.phase;
      if (mode_update(mode, t, in, s.timeline, ctrl_dt)) {
        event(t, "mode_transition", fmt::format("{} -> {}", phase_name(before), phase_name(mode.phase)));
        mon_coarse.reset();
        mon_fine.reset();
        const int next = window_of(mode.phase);
        if (next != window) {
          const Vector3d last = ctrl.command();
          ctrl = AttitudeController(s.control.window[static_cast<std::size_t>(next)].gains, inertia, ctrl_dt);
          ctrl.initialize(last);
          window = next;
          event(t, "controller_switch", fmt::format("window {} -> {}", next - 1, next));
          if (s.control.window[static_cast<std::size_t>(next)].fsm) los_ctrl.reset();
        }
      }
      const PhaseSuite& cur = s.control.window[static_cast<std::size_t>(window)];
      const bool valid = !cur.str || str_last.valid;
      const Vector3d err = sim::attitude_error(q_est, ref.q);
      tau_cmd = ctrl.update(err, w_est - ref.omega, ref.alpha, valid);

      const Vector4d speed = plant.wheel_speeds(x);
      rotor_cmd = -sc.wheels.null_gain * sc.wheels.wheel.rotor_inertia * (null_vec.dot(speed) - null_target) * null_vec;
      if (cur.rws) rotor_cmd -= actuators::rw_allocate(tau_cmd, pyramid);
    }
    const PhaseSuite& cur = s.control.window[static_cast<std::size_t>(window)];

    // Fine LOS loop.
    if (cur.fsm) {
      if (fgs_tick) {
        const auto o = los_ctrl.update(fgs_last.los, fgs_last.valid);
        tilt_cmd = o.tilt;
        if (e_fgs.rise(o.held)) event(t, "fgs_invalid", "FSM command frozen");
        if (e_aw.rise(o.saturated)) event(t, "fsm_anti_windup", "integrator held at the stroke");
      }
    } else {
      tilt_cmd.setZero();
    }
    const auto fsm_step = fsm.step(tilt_cmd);
    if (e_fsm.rise(fsm_step.clipped)) event(t, "fsm_stroke", "mirror at its stroke limit");

    // Proof-mass actuators: velocity feedback on the payload isolator.
    Vector3d pma_force = Vector3d::Zero();
    if (pma_used) {
      pma_cmd.setZero();
      if (cur.pma && iso_pos) pma_cmd = -s.control.pma_gain * x.segment<3>(*iso_pos + ne);
      pma_force = pma.step(pma_cmd).output;
    }

    u.setZero();
    // Reaction wheels.
    Vector4d delivered;
    for (std::size_t j = 0; j < 4; ++j) {
      const Index ji = static_cast<Index>(j);
      wheel_state[j].speed = plant.wheel_speeds(x)(ji);
      wheel_state[j].phase = plant.wheel_phases(x)(ji);
      const auto r = actuators::rw_step(pyramid.wheels[j], wheel_state[j], rotor_cmd(ji), dt, wf, rng_wheel[j]);
      delivered(ji) = r.delivered_torque;
      const auto base = static_cast<Index>(in_wheel[j]);
      u(base + 3) += r.noise(0);
      u(base + 4) += r.noise(1);
      u(base + 5) -= r.delivered_torque;
      if (e_clip[j].rise(r.torque_clipped)) event(t, "wheel_torque_limit", fmt::format("wheel {}", j + 1));
      if (e_sat[j].rise(r.momentum_saturated)) event(t, "wheel_momentum_limit", fmt::format("wheel {}", j + 1));
      if (r.spike) event(t, "wheel_friction_spike", fmt::format("wheel {} {:.3g} N m", j + 1, r.spike_torque));
    }

    // Thrusters.
    if (cur.rcs && k % pwm_steps == 0) {
      Eigen::Matrix<double, 6, 1> want;
      want << 0.0, 0.0, 0.0, tau_cmd;
      Eigen::VectorXd imp;
      try {
        imp = actuators::rcs_allocate(want, thrusters);
      } catch (const actuators::InfeasibleWrench& ex) {
        imp = actuators::rcs_allocate(ex.achievable(), thrusters);
      }
      int below = 0;
      for (std::size_t i = 0; i < thrusters.size(); ++i) {
        const auto& th = thrusters[i];
        const double impulse = imp(static_cast<Index>(i));
        if (impulse <= 0.0) continue;
        if (s.fidelity.pwm) {
          const auto p = actuators::pwm_modulate(impulse, th);
          if (p.below_mib) ++below;
          if (p.width() > 0.0) pulses.push_back({i, t + p.start, t + p.end, th.thrust});
        } else {
          pulses.push_back({i, t, t + th.pwm_period, std::min(th.thrust, impulse / th.pwm_period)});
        }
      }
      if (e_mib.rise(below > 0)) event(t, "rcs_below_mib", fmt::format("{} thrusters idle", below));
    }
    Eigen::Matrix<double, 6, 1> thr = Eigen::Matrix<double, 6, 1>::Zero();
    for (const auto& p : pulses) {
      const double on = std::max(0.0, std::min(p.end, t + dt) - std::max(p.start, t));
      if (on > 0.0) thr += p.force * on / dt * unit_wrench[p.thruster];
    }
    std::erase_if(pulses, [&](const ActivePulse& p) { return p.end <= t + dt; });
    u.segment<6>(static_cast<Index>(in_thr)) = thr;

    // Environment.
    Vector3d gg = Vector3d::Zero();
    if (s.disturbances.gravity_gradient)
      gg = disturbances::gravity_gradient(q, inertia, s.disturbances.orbit.rate,
                                          disturbances::nadir_direction(s.disturbances.orbit, t));
    const auto srp = disturbances::solar_pressure(t, s.disturbances.orbit, s.disturbances.solar);
    u.segment<6>(static_cast<Index>(in_hub)) = srp;
    u.segment<3>(static_cast<Index>(in_hub) + 3) += gg;
    double sadm1 = 0.0, sadm2 = 0.0;
    if (s.fidelity.microstepping && sc.sadm.step_rate > 0.0) {
      sadm1 = actuators::sadm_torque(t, sc.sadm);
      sadm2 = actuators::sadm_torque(t + 0.25 / sc.sadm.step_rate, sc.sadm);
      if (in_sadm1) u(static_cast<Index>(*in_sadm1)) = sadm1;
      if (in_sadm2) u(static_cast<Index>(*in_sadm2)) = sadm2;
    }
    u.segment<3>(static_cast<Index>(in_pma)) = pma_force;

    if (k % log_steps == 0) {
      const Vector3d est_err = sim::attitude_error(q_est, q);
      const Vector4d speed = plant.wheel_speeds(x);
      const Vector3d h = plant.angular_momentum(x);
      std::size_t c = 0;
      auto put = [&](double v) { row[c++] = log_round(v); };
      put(t);
      put(phase_index(mode.phase));
      put(q.w()), put(q.x()), put(q.y()), put(q.z());
      for (int i = 0; i < 3; ++i) put(w(i));
      for (int i = 0; i < 3; ++i) put(att_err(i));
      put(los(0)), put(los(1));
      for (int i = 0; i < 3; ++i) put(est_err(i));
      for (int i = 0; i < 3; ++i) put(gyro_last(i));
      put(str_last.valid ? 1.0 : 0.0);
      put(fgs_last.los(0)), put(fgs_last.los(1)), put(fgs_last.valid ? 1.0 : 0.0);
      for (int i = 0; i < 3; ++i) put(tau_cmd(i));
      for (int i = 0; i < 4; ++i) put(delivered(i));
      for (int i = 0; i < 4; ++i) put(speed(i));
      for (int i = 3; i < 6; ++i) put(thr(i));
      put(tilt_cmd(0)), put(tilt_cmd(1)), put(fsm.output()(0)), put(fsm.output()(1));
      for (int i = 0; i < 3; ++i) put(pma_force(i));
      for (int i = 0; i < 3; ++i) put(gg(i));
      for (int i = 3; i < 6; ++i) put(srp(i));
      put(sadm1), put(sadm2);
      put(iso(0)), put(iso(1));
      for (int i = 0; i < 3; ++i) put(h(i));
      log.append(row);
      mon_coarse.push(att_err);
      mon_fine.push(los);
    }

    plant.step(x, u, delivered, dt);
    for (std::size_t j = 0; j < 4; ++j) plant.set_wheels(x, j, wheel_state[j].speed, wheel_state[j].phase);
    if (!x.allFinite() || Plant::rate(x).norm() > 100.0) {
      res.diverged = true;
      res.failure_time = t + dt;
      res.failure = DivergedSimulation(t + dt).what();
      event(t + dt, "diverged", res.failure);
      break;
    }
  }

  res.log = std::move(log);
  res.score = score_mission(res.log, s.timeline);
  if (res.diverged) {
    res.score.t3_achieved = 0.0;
    res.score.note = res.failure;
  }
  return res;
}

}  // namespace spcm::mission
