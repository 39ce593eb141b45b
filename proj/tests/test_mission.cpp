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


#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fixtures.hpp"
#include "spcm/error.hpp"
#include "spcm/io/scenario_file.hpp"
#include "spcm/mission/control.hpp"
#include "spcm/mission/guidance.hpp"
#include "spcm/mission/plant.hpp"
#include "spcm/mission/scenario.hpp"
#include "spcm/mission/scoring.hpp"
#include "spcm/mission/simulator.hpp"
#include "spcm/mission/timeline.hpp"

using namespace spcm;
using namespace spcm::mission;
using Eigen::Vector2d;
using Eigen::Vector3d;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string default_text() {
  std::ifstream in(test::data_dir() / "default_scenario.yaml");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

std::vector<std::string> config_errors(const std::string& text) {
  try {
    io::parse_scenario(text, "scn.yaml", test::data_dir());
  } catch (const ConfigError& e) {
    return e.messages();
  }
  return {};
}

bool any_contains(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

// Synthetic log: phases laid out back to back, zero pointing error everywhere.
SignalLog synthetic_log(double rate, const std::vector<std::pair<Phase, double>>& plan) {
  SignalLog log({"t", "phase", "att_err_x", "att_err_y", "att_err_z", "los_x", "los_y"}, rate);
  std::size_t k = 0;
  for (const auto& [ph, len] : plan) {
    const auto n = static_cast<std::size_t>(std::llround(len * rate));
    for (std::size_t i = 0; i < n; ++i, ++k)
      log.append(std::vector<double>{static_cast<double>(k) / rate, static_cast<double>(phase_index(ph)), 0, 0, 0, 0, 0});
  }
  return log;
}

ModeTimeline loose_timeline() {
  ModeTimeline tl;
  tl.req.ape1 = 1.0;
  tl.req.ape2 = 1.0;
  tl.req.rpe2 = 1.0;
  tl.req.ape3 = 1.0;
  tl.req.rpe3 = 1.0;
  tl.req.pde3 = 1.0;
  tl.req.window3 = 1.0;
  tl.req.gap3 = 10.0;
  tl.t3 = 100.0;
  return tl;
}

const RequirementVerdict& verdict(const MissionScore& s, const std::string& name) {
  for (const auto& v : s.verdicts)
    if (v.name == name) return v;
  FAIL("no verdict " << name);
  return s.verdicts.front();
}

}  // namespace

TEST_CASE("mode machine: slew dwell, fixed steady durations, forward only") {
  ModeTimeline tl;
  tl.dwell = 10.0;
  tl.t1 = 30.0;
  tl.t2 = 60.0;
  const double tick = 0.02;
  ModeState st;
  ModeInputs in;
  in.slew_complete = true;
  in.coarse.ape_now = 0.5 * tl.req.ape1;

  // Dwell interrupted at 5 s restarts the clock.
  std::vector<std::pair<double, Phase>> transitions;
  for (int k = 0; k <= 20000; ++k) {
    const double t = k * tick;
    in.coarse.ape_now = (std::abs(t - 5.0) < 0.5 * tick) ? 2.0 * tl.req.ape1 : 0.5 * tl.req.ape1;
    const bool coarse_ok = st.phase == Phase::CoarseTransient && t >= 50.0;
    in.coarse.window_full = coarse_ok;
    in.coarse.ape_window = coarse_ok ? 0.0 : 1.0;
    in.coarse.rpe_window = 0.0;
    const bool fine_ok = st.phase == Phase::FineTransient && t >= 120.0;
    in.fine.window_full = fine_ok;
    in.fine.ape_window = fine_ok ? 0.0 : 1.0;
    const Phase before = st.phase;
    if (mode_update(st, t, in, tl, tick)) {
      CHECK(phase_index(st.phase) == phase_index(before) + 1);
      transitions.emplace_back(t, st.phase);
    }
  }
  REQUIRE(transitions.size() == 5);
  CHECK(transitions[0].first == doctest::Approx(5.02 + 10.0));   // below since 5.02
  CHECK(transitions[1].first == doctest::Approx(15.02 + 30.0));  // exactly t1 later
  CHECK(transitions[2].first == doctest::Approx(50.0));
  CHECK(transitions[3].first == doctest::Approx(50.0 + 60.0));   // exactly t2 later
  CHECK(transitions[4].first == doctest::Approx(120.0));
  CHECK(transitions[4].second == Phase::FineSteady);

  // No slew completion, no transition however small the error.
  ModeState s2;
  in.slew_complete = false;
  in.coarse.ape_now = 0.0;
  for (int k = 0; k < 2000; ++k) CHECK_FALSE(mode_update(s2, k * tick, in, tl, tick));
}

TEST_CASE("slew profile: triangular 90 deg at 1 deg/s and 0.01 deg/s^2") {
  const sim::Quaternion q0 = sim::Quaternion::Identity();
  const sim::Quaternion q1(Eigen::AngleAxisd(90.0 * kDeg, Vector3d::UnitZ()));
  const auto p = slew_guidance(q0, q1, 1.0 * kDeg, 0.01 * kDeg);
  // Half the angle at constant acceleration: 45 = a T^2 / 2 per half, peak rate 0.95 deg/s < limit.
  const double oracle = 2.0 * std::sqrt(90.0 / 0.01);
  CHECK(p.duration() == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(p.duration() == doctest::Approx(190.0).epsilon(0.01));
  CHECK_FALSE(p.has_coast());

  double wmax = 0.0;
  for (double t = 0.0; t <= p.duration() + 5.0; t += 0.05) {
    const auto r = p.sample(t);
    CHECK(r.omega.norm() <= 1.0 * kDeg * (1.0 + 1e-12));
    CHECK(r.alpha.norm() <= 0.01 * kDeg * (1.0 + 1e-12));
    wmax = std::max(wmax, r.omega.norm());
  }
  CHECK(wmax == doctest::Approx(0.01 * kDeg * oracle / 2.0).epsilon(1e-3));
  CHECK(p.sample(0.0).q.angularDistance(q0) < 1e-12);
  CHECK(p.sample(p.duration()).q.angularDistance(q1) < 1e-9);
  CHECK(p.sample(p.duration() + 100.0).omega.norm() == 0.0);

  // Long slew reaches the rate limit and coasts.
  const sim::Quaternion q2(Eigen::AngleAxisd(170.0 * kDeg, Vector3d(1, 1, 0).normalized()));
  const auto c = slew_guidance(q0, q2, 1.0 * kDeg, 0.1 * kDeg);
  CHECK(c.has_coast());
  CHECK(c.duration() == doctest::Approx(170.0 / 1.0 + 1.0 / 0.1).epsilon(1e-9));
  CHECK_THROWS_AS(slew_guidance(q0, q1, 0.0, 1.0), ConfigError);
}

TEST_CASE("attitude controller: zero in, zero out; held on invalid sensors") {
  AttitudeGains g;
  AttitudeController c(g, Eigen::Vector3d(1200, 1100, 900).asDiagonal(), 0.02);
  for (int i = 0; i < 100; ++i) CHECK(c.update(Vector3d::Zero(), Vector3d::Zero(), Vector3d::Zero(), true).norm() == 0.0);
  const Vector3d u = c.update(Vector3d(1e-3, 0, 0), Vector3d::Zero(), Vector3d::Zero(), true);
  CHECK(c.update(Vector3d(1.0, 1.0, 1.0), Vector3d::Zero(), Vector3d::Zero(), false) == u);
}

TEST_CASE("attitude controller: rigid closed loop has the configured bandwidth and damping") {
  AttitudeGains g;
  g.bandwidth = 0.1;
  g.damping = 0.7;
  g.rolloff_frequency = 0.0;
  const double inertia = 1000.0, period = 0.02;
  AttitudeController c(g, Eigen::Matrix3d::Identity() * inertia, period);
  // theta'' = u / J, command held over each period, integrated in fine substeps.
  double th = 1e-3, om = 0.0;
  const int sub = 20;
  double worst = 0.0;
  const double wd = g.bandwidth * std::sqrt(1.0 - g.damping * g.damping);
  for (int k = 0; k < 5000; ++k) {
    const double t = k * period;
    const double zw = g.damping * g.bandwidth;
    const double ref = 1e-3 * std::exp(-zw * t) * (std::cos(wd * t) + zw / wd * std::sin(wd * t));
    worst = std::max(worst, std::abs(th - ref));
    const double u = c.update(Vector3d(th, 0, 0), Vector3d(om, 0, 0), Vector3d::Zero(), true)(0);
    for (int j = 0; j < sub; ++j) {
      const double h = period / sub;
      th += om * h + 0.5 * u / inertia * h * h;
      om += u / inertia * h;
    }
  }
  // Sampled-data deviation from the continuous response stays within 5 % of the initial error.
  CHECK(worst < 0.05 * 1e-3);
}

TEST_CASE("default gains roll off the first flexible mode by at least 20 dB") {
  const auto s = io::load_scenario(test::data_dir() / "default_scenario.yaml");
  const auto m = structure::assemble(build_structure(s), s.spacecraft.theta);
  const double w1 = m.flexible_frequencies().front();
  for (const auto& suite : s.control.window) {
    const double gain = std::abs(rolloff_response(suite.gains, w1));
    CHECK(20.0 * std::log10(gain) <= -20.0);
  }
  AttitudeGains off;
  off.rolloff_frequency = 0.0;
  CHECK(std::abs(rolloff_response(off, w1)) == 1.0);
}

TEST_CASE("bumpless initialization keeps the command") {
  AttitudeGains g;
  AttitudeController c(g, Eigen::Matrix3d::Identity() * 1000.0, 0.02);
  const Vector3d cmd(0.01, -0.02, 0.005);
  c.initialize(cmd);
  CHECK(c.command() == cmd);
  // With the PD term equal to the held command the filter output does not move.
  const Vector3d err = -cmd / (1000.0 * g.bandwidth * g.bandwidth);
  const Vector3d next = c.update(err, Vector3d::Zero(), Vector3d::Zero(), true);
  CHECK((next - cmd).norm() < 1e-12);
}

TEST_CASE("FSM loop: DC nulling and anti-windup") {
  Eigen::Matrix2d s;
  s << 0.2, 0.05, -0.03, 0.4;
  const double stroke = 1e-3;
  FineLosController f(3.0, stroke, s, 0.1);
  const Vector2d offset(2e-5, -1e-5);
  for (int i = 0; i < 400; ++i) f.update(offset + s * f.tilt(), true);
  // Steady state: S tilt cancels the offset exactly.
  CHECK((f.tilt() + s.inverse() * offset).norm() < 1e-12);

  // Hold on an invalid guider frame.
  const Vector2d before = f.tilt();
  const auto held = f.update(Vector2d(1.0, 1.0), false);
  CHECK(held.held);
  CHECK(f.tilt() == before);

  // Offset beyond authority: stroke respected, integrator frozen, immediate recovery.
  f.reset();
  const Vector2d big(1e-2, 0.0);
  bool saturated = false;
  for (int i = 0; i < 500; ++i) {
    const auto o = f.update(big + s * f.tilt(), true);
    saturated = saturated || o.saturated;
    CHECK(f.tilt().cwiseAbs().maxCoeff() <= stroke);
  }
  CHECK(saturated);
  const Vector2d at_limit = f.tilt();
  f.update(Vector2d(-1e-5, 0.0), true);
  CHECK((f.tilt() - at_limit).norm() > 0.0);
  CHECK(f.tilt().cwiseAbs().maxCoeff() < stroke);
}

TEST_CASE("scoring: all passing gives the whole FineSteady interval") {
  const double rate = 50.0;
  auto log = synthetic_log(rate, {{Phase::SlewTransient, 40}, {Phase::SlewSteady, 30}, {Phase::CoarseTransient, 20},
                                  {Phase::CoarseSteady, 60}, {Phase::FineTransient, 10}, {Phase::FineSteady, 140}});
  const auto tl = loose_timeline();
  const auto s = score_mission(log, tl);
  CHECK(s.completed);
  const double t_entry = 40 + 30 + 20 + 60 + 10;
  const double t_total = t_entry + 140;
  CHECK(s.phases[5].start == doctest::Approx(t_entry));
  CHECK(s.phases[5].end == doctest::Approx(t_total));
  CHECK(s.t3_achieved == doctest::Approx(t_total - t_entry));
  CHECK(s.fraction() == 1.0);
  for (const auto& v : s.verdicts) {
    CHECK(v.evaluated);
    CHECK(v.pass);
    CHECK_FALSE(v.first_violation.has_value());
  }
}

TEST_CASE("scoring: one PDE violation cuts the passing tail at the later window") {
  const double rate = 50.0;
  auto log = synthetic_log(rate, {{Phase::SlewTransient, 1}, {Phase::SlewSteady, 1}, {Phase::CoarseTransient, 1},
                                  {Phase::CoarseSteady, 20}, {Phase::FineTransient, 1}, {Phase::FineSteady, 100}});
  auto tl = loose_timeline();
  tl.req.pde3 = 1e-6;
  const std::size_t first = static_cast<std::size_t>(std::llround(24.0 * rate));
  const std::size_t j = 3000;  // sample within FineSteady (60 s after entry)
  const std::size_t n = 51, off = 550;  // 1 s window spans 51 samples inclusive
  // One sample bumped: every window holding it has its mean moved by bump / n.
  SignalLog bumped(log.columns(), rate);
  for (std::size_t r = 0; r < log.rows(); ++r) {
    std::vector<double> row(log.row(r).begin(), log.row(r).end());
    if (r == first + j) row[5] = 3.0 * n * tl.req.pde3;
    bumped.append(row);
  }
  const auto s = score_mission(bumped, tl);
  const auto& pde = verdict(s, "PDE3");
  CHECK(pde.evaluated);
  CHECK_FALSE(pde.pass);
  CHECK(verdict(s, "RPE3").pass);
  CHECK(verdict(s, "APE3").pass);
  // First failing pair has j at the end of its later window.
  REQUIRE(pde.first_violation.has_value());
  CHECK(*pde.first_violation == doctest::Approx(24.0 + static_cast<double>(j - off - n + 1) / rate));
  // Last failing pair starts at j; its later window ends at j + off + n.
  const std::size_t count = 100 * 50;
  CHECK(s.t3_achieved == doctest::Approx(static_cast<double>(count - (j + off + n)) / rate));
}

TEST_CASE("scoring: requirements never met score zero; missing phases are reported") {
  const double rate = 50.0;
  auto tl = loose_timeline();
  tl.req.ape3 = 1e-6;
  auto base = synthetic_log(rate, {{Phase::SlewTransient, 1}, {Phase::SlewSteady, 1}, {Phase::CoarseTransient, 1},
                                   {Phase::CoarseSteady, 20}, {Phase::FineTransient, 1}, {Phase::FineSteady, 50}});
  SignalLog bad(base.columns(), rate);
  for (std::size_t r = 0; r < base.rows(); ++r) {
    std::vector<double> row(base.row(r).begin(), base.row(r).end());
    row[5] = 1e-3;
    bad.append(row);
  }
  const auto s = score_mission(bad, tl);
  CHECK(s.t3_achieved == 0.0);
  CHECK_FALSE(verdict(s, "APE3").pass);
  CHECK(*verdict(s, "APE3").first_violation == doctest::Approx(24.0));

  auto partial = synthetic_log(rate, {{Phase::SlewTransient, 10}, {Phase::SlewSteady, 5}});
  const auto p = score_mission(partial, tl);
  CHECK_FALSE(p.completed);
  CHECK(p.t3_achieved == 0.0);
  CHECK_FALSE(p.phases[3].reached);
  CHECK_FALSE(verdict(p, "PDE3").evaluated);
  CHECK_FALSE(p.note.empty());

  // FineSteady too short for one PDE pair.
  auto shortfine = synthetic_log(rate, {{Phase::SlewTransient, 1}, {Phase::SlewSteady, 1}, {Phase::CoarseTransient, 1},
                                        {Phase::CoarseSteady, 20}, {Phase::FineTransient, 1}, {Phase::FineSteady, 11}});
  const auto sf = score_mission(shortfine, loose_timeline());
  CHECK(sf.t3_achieved == 0.0);
  CHECK_FALSE(sf.note.empty());
}

TEST_CASE("plant: free-floating angular momentum and quaternion norm are conserved") {
  auto sc = test::full_structure();
  auto m = structure::assemble(sc, {0.0, 0.0});
  WheelAssemblyConfig w;
  w.wheel.rotor_inertia = 0.08;
  const auto pyr = w.pyramid();
  actuators::WheelFidelity off;
  off.imbalance = false;
  off.friction = false;
  off.spikes = false;
  off.noise = false;
  Plant p(m, pyr, off);
  auto x = p.initial_state(sim::Quaternion::Identity(), Eigen::Vector4d(60.0, -40.0, 80.0, 20.0));
  const Vector3d w0(2e-3, -1e-3, 1.5e-3);
  x.segment<3>(7) = w0;
  // Zero linear momentum, so the angular momentum about the hub point is the inertial one.
  const Eigen::MatrixXd& mm = p.model().mass;
  x.segment<3>(4) = -mm.topLeftCorner<3, 3>().ldlt().solve(mm.block<3, 3>(0, 3) * w0);
  x.segment(10, static_cast<Eigen::Index>(p.elastic_size())).setConstant(1e-5);
  const Vector3d h0 = p.angular_momentum(x);
  const Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.input_size()));
  const double dt = 0.002;
  double worst = 0.0, qerr = 0.0;
  for (int k = 0; k < 500000; ++k) {
    p.step(x, u, Eigen::Vector4d::Zero(), dt);
    if (k % 1000 == 999) {
      const double d = (p.angular_momentum(x) - h0).norm() / h0.norm();
      worst = std::isfinite(d) ? std::max(worst, d) : 1.0;
      qerr = std::max(qerr, std::abs(Plant::attitude(x).norm() - 1.0));
    }
  }
  REQUIRE(x.allFinite());
  CHECK(worst < 1e-6);
  CHECK(qerr < 1e-12);
}

TEST_CASE("plant: internal rotor torque exchanges momentum without changing the total") {
  auto m = structure::assemble(test::full_structure(), {0.0, 0.0});
  WheelAssemblyConfig w;
  w.wheel.rotor_inertia = 0.08;
  actuators::WheelFidelity off;
  off.imbalance = off.friction = off.spikes = off.noise = false;
  Plant p(m, w.pyramid(), off);
  auto x = p.initial_state(sim::Quaternion::Identity(), Eigen::Vector4d::Zero());
  const Vector3d h0 = p.angular_momentum(x);
  const Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.input_size()));
  Eigen::VectorXd u_react = u;
  // The rotor torque reacts on the housing: -tau about the spin axis.
  for (std::size_t k = 0; k < 4; ++k) u_react(static_cast<Eigen::Index>(p.input(structure::wheel_input_names(k)[5]))) = -0.01;
  for (int k = 0; k < 5000; ++k) p.step(x, u_react, Eigen::Vector4d::Constant(0.01), 0.002);
  CHECK(p.wheel_speeds(x).minCoeff() > 0.0);
  CHECK((p.angular_momentum(x) - h0).norm() < 1e-8);
  CHECK(Plant::rate(x).norm() > 1e-6);
}

TEST_CASE("scenario validation collects every problem with its location") {
  const std::string text = default_text();
  CHECK(config_errors(text).empty());

  auto e = config_errors(replace_once(text, "ape3: 1.0e-5", "ape3: 5.0e-4"));
  CHECK(any_contains(e, "ape3"));

  auto bad_rate = replace_once(replace_once(text, "dt: 0.002", "dt: 0.001"), "star_tracker: {rate: 10", "star_tracker: {rate: 3");
  e = config_errors(bad_rate);
  CHECK(any_contains(e, "star_tracker.rate"));

  auto unknown = replace_once(text, "  log_rate: 50", "  log_rate: 50\n  stepsize: 3");
  e = config_errors(unknown);
  REQUIRE_FALSE(e.empty());
  CHECK(any_contains(e, "scn.yaml:9:3"));
  CHECK(any_contains(e, "unknown key 'stepsize'"));

  // Several problems at once are all reported.
  e = config_errors(replace_once(unknown, "ape3: 1.0e-5", "ape3: 5.0e-4"));
  CHECK(any_contains(e, "stepsize"));
  CHECK(any_contains(e, "ape3"));

  CHECK_THROWS_AS(io::parse_scenario("a: [1, 2", "x.yaml", test::data_dir()), ParseError);
}

TEST_CASE("scenario parameters: known paths apply, unknown paths are rejected") {
  auto s = io::load_scenario(test::data_dir() / "default_scenario.yaml");
  const double f0 = s.spacecraft.appendages[0].appendage.frequencies(0);
  const double d0 = (*s.spacecraft.payload).isolator.damping(3, 3);
  apply_parameter(s, "appendage.array_*.frequency_scale", 1.2);
  apply_parameter(s, "payload.isolator.damping_scale", 0.5);
  CHECK(s.spacecraft.appendages[0].appendage.frequencies(0) == doctest::Approx(1.2 * f0));
  CHECK(s.spacecraft.appendages[1].appendage.frequencies(0) == doctest::Approx(1.2 * f0));
  CHECK(s.spacecraft.appendages[2].appendage.frequencies(0) != doctest::Approx(1.2 * f0));
  CHECK((*s.spacecraft.payload).isolator.damping(3, 3) == doctest::Approx(0.5 * d0));
  CHECK_THROWS_AS(apply_parameter(s, "payload.isolator.mass_scale", 1.0), LabelError);
  CHECK_FALSE(is_parameter_path(s, "appendage.nothing.frequency_scale"));
}

TEST_CASE("default mission: all phases, bumpless switches, deterministic") {
  const auto s = io::load_scenario(test::data_dir() / "default_scenario.yaml");
  const auto a = simulate(s);
  CHECK_FALSE(a.diverged);
  CHECK(a.score.completed);
  CHECK(a.score.t3_achieved > 0.0);

  // Command steps across each controller switch stay within the bound.
  const auto& log = a.log;
  const std::size_t ct = log.column("t");
  const std::array<std::size_t, 3> tau = {log.column("tau_cmd_x"), log.column("tau_cmd_y"), log.column("tau_cmd_z")};
  int switches = 0;
  for (const auto& ev : a.events) {
    if (ev.type != "controller_switch") continue;
    ++switches;
    std::size_t r = 0;
    while (r + 1 < log.rows() && log.at(r + 1, ct) <= ev.t + 1e-9) ++r;
    REQUIRE(r + 1 < log.rows());
    double jump = 0.0;
    for (auto c : tau) jump = std::max(jump, std::abs(log.at(r + 1, c) - log.at(r, c)));
    CHECK(jump <= s.control.jump_bound);
  }
  CHECK(switches == 2);

  SimulationOptions shorter;
  shorter.duration = 60.0;
  const auto b1 = simulate(s, shorter), b2 = simulate(s, shorter);
  REQUIRE(b1.log.rows() == b2.log.rows());
  bool same = true;
  for (std::size_t r = 0; r < b1.log.rows(); ++r)
    for (std::size_t c = 0; c < b1.log.width(); ++c) same = same && b1.log.at(r, c) == b2.log.at(r, c);
  CHECK(same);
  CHECK(b1.events.size() == b2.events.size());

  auto other = s;
  other.seed += 1;
  const auto b3 = simulate(other, shorter);
  CHECK(b3.log.at(b3.log.rows() - 1, b3.log.column("gyro_x")) != b1.log.at(b1.log.rows() - 1, b1.log.column("gyro_x")));
}

TEST_CASE("divergence is reported, not thrown") {
  auto s = io::load_scenario(test::data_dir() / "default_scenario.yaml");
  // Sampled PD far beyond the controller rate, unlimited wheels.
  s.spacecraft.wheels.wheel.max_torque = 1e9;
  s.spacecraft.wheels.wheel.max_momentum = 1e12;
  for (auto& w : s.control.window) {
    w.gains.bandwidth = 500.0;
    w.gains.rolloff_frequency = 0.0;
    w.gains.torque_limit = 0.0;
    w.rcs = false;
    w.rws = true;
  }
  SimulationOptions o;
  o.duration = 60.0;
  SimulationResult r;
  CHECK_NOTHROW(r = simulate(s, o));
  CHECK(r.diverged);
  CHECK(r.score.t3_achieved == 0.0);
  CHECK(r.failure_time > 0.0);
  bool logged = false;
  for (const auto& e : r.events) logged = logged || e.type == "diverged";
  CHECK(logged);
}
