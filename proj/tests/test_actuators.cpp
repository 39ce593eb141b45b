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
#include <numbers>

#include "spcm/actuators/mechanisms.hpp"
#include "spcm/actuators/reaction_wheel.hpp"
#include "spcm/actuators/thrusters.hpp"
#include "spcm/sim/nnls.hpp"
#include "spcm/sim/random.hpp"
#include "spcm/sim/spectrum.hpp"

using namespace spcm;
using namespace spcm::actuators;

namespace {

constexpr double kPi = std::numbers::pi;

ReactionWheel test_wheel() {
  ReactionWheel w;
  w.rotor_inertia = 0.08;
  w.max_torque = 0.2;
  w.max_momentum = 30.0;
  w.friction = {0.002, 0.005, 1.0, 1e-5};
  return w;
}

WheelFidelity none() { return {false, false, false, false, false, false}; }

Thruster test_thruster() {
  Thruster t;
  t.thrust = 1.0;
  t.mib = 0.01;
  t.pwm_period = 0.1;
  t.quantum = 1e-3;
  return t;
}

}  // namespace

TEST_CASE("rw_step: idle wheel produces nothing") {
  sim::Rng rng(1);
  WheelState s;
  const auto r = rw_step(test_wheel(), s, 0.0, 0.002, none(), rng);
  CHECK(r.delivered_torque == 0.0);
  CHECK(r.speed == 0.0);
  CHECK(r.wrench.isZero(0.0));
  // All effects on but nothing to excite.
  WheelState s2;
  WheelFidelity all;
  all.spikes = false;
  const auto r2 = rw_step(test_wheel(), s2, 0.0, 0.002, all, rng);
  CHECK(r2.delivered_torque == 0.0);
  CHECK(r2.wrench.isZero(0.0));
}

TEST_CASE("rw_step: command clipping and friction") {
  sim::Rng rng(1);
  const auto w = test_wheel();
  WheelFidelity flags = none();
  flags.saturation = true;
  WheelState s{50.0, 0.0, false};
  auto r = rw_step(w, s, 2.0 * w.max_torque, 0.002, flags, rng);
  CHECK(r.torque_clipped);
  CHECK(r.delivered_torque == doctest::Approx(w.max_torque).epsilon(1e-15));
  CHECK(r.speed == doctest::Approx(50.0 + w.max_torque * 0.002 / w.rotor_inertia).epsilon(1e-14));

  flags.friction = true;
  s = {50.0, 0.0, false};
  r = rw_step(w, s, 2.0 * w.max_torque, 0.002, flags, rng);
  CHECK(r.delivered_torque == doctest::Approx(w.max_torque + stribeck_torque(w.friction, 50.0)).epsilon(1e-14));
  CHECK(r.delivered_torque < w.max_torque);
}

TEST_CASE("Stribeck deficit at zero-plus speed is the stiction level") {
  const auto w = test_wheel();
  const double eps = 1e-12;
  CHECK(std::abs(-stribeck_torque(w.friction, eps) - w.friction.stiction) < 1e-9);
  CHECK(std::abs(stribeck_torque(w.friction, -eps) - w.friction.stiction) < 1e-9);
  // Far from zero the Coulomb plus viscous level remains.
  CHECK(stribeck_torque(w.friction, 100.0) == doctest::Approx(-(0.002 + 1e-3)).epsilon(1e-9));
  // Monotone decay of the Stribeck bump on (0, 5 omega_s).
  double prev = 1e9;
  for (double om = 0.01; om < 5.0; om += 0.01) {
    const double mag = -stribeck_torque(w.friction, om) - w.friction.viscous * om;
    CHECK(mag <= prev + 1e-15);
    prev = mag;
  }
  sim::Rng rng(2);
  WheelFidelity flags = none();
  flags.friction = true;
  WheelState s{eps, 0.0, false};
  const auto r = rw_step(w, s, 0.1, 0.002, flags, rng);
  CHECK(std::abs((0.1 - r.delivered_torque) - w.friction.stiction) < 1e-9);
}

TEST_CASE("stick band holds the rotor at zero") {
  auto w = test_wheel();
  w.stick_band = 0.05;
  sim::Rng rng(3);
  WheelFidelity flags = none();
  flags.friction = true;
  WheelState s{0.01, 0.0, false};
  const auto r = rw_step(w, s, 0.003, 0.002, flags, rng);  // below stiction
  CHECK(s.stuck);
  CHECK(r.speed == 0.0);
  // A command above stiction breaks away.
  const auto r2 = rw_step(w, s, 0.05, 0.002, flags, rng);
  CHECK_FALSE(s.stuck);
  CHECK(r2.delivered_torque == doctest::Approx(0.05 - w.friction.stiction));
  // Coasting down never reverses.
  WheelState c{0.5, 0.0, false};
  w.stick_band = 0.0;
  for (int i = 0; i < 20000; ++i) {
    rw_step(w, c, 0.0, 0.002, flags, rng);
    CHECK(c.speed >= 0.0);
  }
  CHECK(c.speed == 0.0);
}

TEST_CASE("momentum saturation zeroes torque at the limit") {
  const auto w = test_wheel();
  sim::Rng rng(4);
  WheelFidelity flags = none();
  flags.saturation = true;
  const double limit = w.max_momentum / w.rotor_inertia;
  WheelState s{limit, 0.0, false};
  const auto r = rw_step(w, s, 0.1, 0.002, flags, rng);
  CHECK(r.momentum_saturated);
  CHECK(r.delivered_torque == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s.speed == doctest::Approx(limit));
  // Pulling away from the limit is allowed.
  const auto r2 = rw_step(w, s, -0.1, 0.002, flags, rng);
  CHECK_FALSE(r2.momentum_saturated);
  CHECK(r2.delivered_torque == -0.1);
}

TEST_CASE("imbalance amplitude and spectral placement") {
  auto w = test_wheel();
  w.static_imbalance = 1e-6;
  w.dynamic_imbalance = 2e-7;
  const Vector6 f = imbalance_wrench(w, 100.0, 0.3, WheelFidelity{});
  CHECK(std::hypot(f(0), f(1)) == doctest::Approx(1e-2).epsilon(1e-12));
  CHECK(std::hypot(f(3), f(4)) == doctest::Approx(2e-3).epsilon(1e-12));
  CHECK(f(2) == 0.0);
  CHECK(f(5) == 0.0);

  // Log at constant speed, 40 s at 500 Hz; 100 rad/s is off-bin so use one that is on-bin.
  const double dt = 0.002;
  const double omega = 2.0 * kPi * 15.0;
  sim::Rng rng(5);
  WheelFidelity flags = none();
  flags.imbalance = true;
  WheelState s{omega, 0.0, false};
  std::vector<double> fx, tx;
  for (int i = 0; i < 20000; ++i) {
    const auto r = rw_step(w, s, 0.0, dt, flags, rng);
    fx.push_back(r.wrench(0));
    tx.push_back(r.wrench(3));
  }
  const auto sf = sim::amplitude_spectrum(fx, 1.0 / dt);
  const auto st = sim::amplitude_spectrum(tx, 1.0 / dt);
  const auto k = sf.peak_bin(0.5);
  CHECK(std::abs(static_cast<long>(k) - static_cast<long>(sf.nearest_bin(15.0))) <= 1);
  CHECK(std::abs(sf.amplitude[k] / (w.static_imbalance * omega * omega) - 1.0) < 0.02);
  const auto kt = st.peak_bin(0.5);
  CHECK(std::abs(static_cast<long>(kt) - static_cast<long>(st.nearest_bin(15.0))) <= 1);
  CHECK(std::abs(st.amplitude[kt] / (w.dynamic_imbalance * omega * omega) - 1.0) < 0.02);
}

TEST_CASE("harmonic table adds lines at integer orders") {
  auto w = test_wheel();
  w.static_imbalance = 1e-6;
  w.harmonics = {{2.0, 3e-7, 0.0, 0.0}, {3.0, 1e-7, 0.0, 1.0}};
  const double dt = 0.002, omega = 2.0 * kPi * 10.0;
  sim::Rng rng(6);
  WheelFidelity flags = none();
  flags.imbalance = flags.harmonics = true;
  WheelState s{omega, 0.0, false};
  std::vector<double> fx;
  for (int i = 0; i < 10000; ++i) fx.push_back(rw_step(w, s, 0.0, dt, flags, rng).wrench(0));
  const auto sp = sim::amplitude_spectrum(fx, 1.0 / dt);
  CHECK(sp.amplitude[sp.nearest_bin(20.0)] == doctest::Approx(3e-7 * omega * omega).epsilon(0.02));
  CHECK(sp.amplitude[sp.nearest_bin(30.0)] == doctest::Approx(1e-7 * omega * omega).epsilon(0.02));
}

TEST_CASE("friction spikes follow the configured Poisson rate and are seeded") {
  auto w = test_wheel();
  w.spikes = {3600.0 * 5.0, 0.01, 0.02};  // 5 per second
  WheelFidelity flags = none();
  flags.spikes = true;
  auto count = [&](std::uint64_t seed, std::vector<double>* amps) {
    sim::Rng rng(seed);
    WheelState s{10.0, 0.0, false};
    int n = 0;
    for (int i = 0; i < 100000; ++i) {  // 200 s
      const auto r = rw_step(w, s, 0.0, 0.002, flags, rng);
      if (r.spike) {
        ++n;
        if (amps) amps->push_back(r.spike_torque);
        CHECK(std::abs(r.spike_torque) >= 0.01);
        CHECK(std::abs(r.spike_torque) <= 0.02);
      }
    }
    return n;
  };
  std::vector<double> a1, a2;
  const int n1 = count(9, &a1);
  CHECK(std::abs(n1 - 1000) < 4 * std::sqrt(1000.0));
  count(9, &a2);
  CHECK(a1 == a2);
}

TEST_CASE("rw_allocate: minimum norm pseudo-inverse") {
  const auto pyr = RWPyramid::make(test_wheel(), kPi / 4.0, {kPi / 4, 3 * kPi / 4, 5 * kPi / 4, 7 * kPi / 4});
  std::vector<std::string> errors;
  pyr.validate("rwa", errors);
  CHECK(errors.empty());
  CHECK(rw_allocate(Eigen::Vector3d::Zero(), pyr).isZero(0.0));

  const Eigen::Vector4d sym = rw_allocate(Eigen::Vector3d(0, 0, 1.0), pyr);
  for (int i = 1; i < 4; ++i) CHECK(sym(i) == doctest::Approx(sym(0)).epsilon(1e-12));
  // Oracle: four equal torques t along axes with z component sin(45 deg) sum to 1.
  CHECK(sym(0) == doctest::Approx(1.0 / (4.0 * std::sin(kPi / 4.0))).epsilon(1e-12));

  const auto a = pyr.allocation_matrix();
  CHECK((a * pyr.null_vector()).norm() < 1e-12);
  sim::Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d tau(rng.normal(), rng.normal(), rng.normal());
    const Eigen::Vector4d u = rw_allocate(tau, pyr);
    CHECK((a * u - tau).norm() < 1e-12);
    CHECK(std::abs(u.dot(pyr.null_vector())) < 1e-12);  // minimum norm
  }

  auto flat = RWPyramid::make(test_wheel(), 0.0, {0.0, kPi / 2, kPi, 3 * kPi / 2});
  errors.clear();
  flat.validate("rwa", errors);
  CHECK(errors.size() == 1);
}

TEST_CASE("pwm_modulate: deadband, saturation, duty ratio") {
  const auto t = test_thruster();
  CHECK(pwm_modulate(0.005, t).on_time == 0.0);
  CHECK(pwm_modulate(0.005, t).below_mib);
  const auto full = pwm_modulate(t.thrust * t.pwm_period, t);
  CHECK(full.saturated);
  CHECK(full.on_time == doctest::Approx(t.pwm_period));
  const auto half = pwm_modulate(0.5 * t.thrust * t.pwm_period, t);
  CHECK(half.on_time / t.pwm_period == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t.thrust * half.width() / t.pwm_period == doctest::Approx(t.thrust / 2.0).epsilon(1e-12));

  Thruster d = t;
  d.delay_on = d.delay_off = 0.004;
  const auto p = pwm_modulate(0.03, d);
  CHECK(p.start == doctest::Approx(0.004));
  CHECK(p.end == doctest::Approx(0.034));
  CHECK(p.width() == doctest::Approx(0.03));
}

TEST_CASE("pwm mean value and minimum pulse over many cycles") {
  const auto t = test_thruster();
  sim::Rng rng(21);
  double total_err = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double c = rng.uniform(t.mib, t.thrust * t.pwm_period);
    const auto p = pwm_modulate(c, t);
    CHECK(p.width() >= t.mib / t.thrust - 1e-12);
    CHECK(std::abs(t.thrust * p.width() - c) <= t.thrust * t.quantum + 1e-12);
    total_err += t.thrust * p.width() - c;
  }
  CHECK(std::abs(total_err / 10000.0) <= t.thrust * t.quantum);
  // Constant command, mean delivered per cycle.
  const double c = 0.0234;
  const auto p = pwm_modulate(c, t);
  CHECK(std::abs(p.width() * t.thrust - c) <= t.thrust * t.quantum);
}

TEST_CASE("nnls against a brute-force active-set oracle") {
  sim::Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd a(5, 4);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
    Eigen::VectorXd b(5);
    for (int i = 0; i < 5; ++i) b(i) = rng.normal();
    const auto r = sim::nnls(a, b);
    // Oracle: best over every subset of active columns.
    double best = b.norm();
    for (int mask = 1; mask < 16; ++mask) {
      std::vector<int> cols;
      for (int j = 0; j < 4; ++j)
        if (mask & (1 << j)) cols.push_back(j);
      Eigen::MatrixXd sub(5, static_cast<Eigen::Index>(cols.size()));
      for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
      const Eigen::VectorXd z = sub.colPivHouseholderQr().solve(b);
      if (z.minCoeff() < 0.0) continue;
      best = std::min(best, (sub * z - b).norm());
    }
    CHECK(r.x.minCoeff() >= 0.0);
    CHECK(r.residual == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("rcs_allocate on the parallelepiped layout") {
  const auto layout = parallelepiped_layout(1.0, 0.8, test_thruster());
  REQUIRE(layout.size() == 12);
  using W = Eigen::Matrix<double, 6, 1>;
  CHECK(rcs_allocate(W::Zero(), layout).isZero(0.0));

  W tz = W::Zero();
  tz(5) = 0.4;
  const Eigen::VectorXd imp = rcs_allocate(tz, layout);
  // Oracle: the +x thruster at y=-b and the -x thruster at y=+b, each tau/(2b).
  CHECK(imp(1) == doctest::Approx(0.4 / (2 * 0.8) * 0.1).epsilon(1e-9));
  CHECK(imp(2) == doctest::Approx(imp(1)).epsilon(1e-9));
  for (int i = 0; i < 12; ++i)
    if (i != 1 && i != 2) CHECK(imp(i) == doctest::Approx(0.0).epsilon(1e-12));

  sim::Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    W w;
    for (int i = 0; i < 6; ++i) w(i) = rng.normal();
    const Eigen::VectorXd x = rcs_allocate(w, layout);
    W got = W::Zero();
    for (int i = 0; i < 12; ++i) got += x(i) / 0.1 * layout[static_cast<std::size_t>(i)].unit_wrench();
    CHECK(x.minCoeff() >= 0.0);
    CHECK((got - w).norm() < 1e-9 * std::max(1.0, w.norm()));
  }

  // Only the +x-firing thrusters: a -x force is unreachable.
  std::vector<Thruster> plus_x(layout.begin(), layout.begin() + 2);
  W fx = W::Zero();
  fx(0) = -1.0;
  try {
    rcs_allocate(fx, plus_x);
    FAIL("expected InfeasibleWrench");
  } catch (const InfeasibleWrench& e) {
    CHECK(e.achievable().norm() < 1e-12);  // the projection onto the cone is the origin
  }
}

TEST_CASE("sadm microstepping torque") {
  SADMModel m;
  m.step_rate = 2.0;
  CHECK(sadm_torque(1.234, m) == 0.0);
  m.harmonics = {{1.0, 0.01, 0.2}};
  std::vector<double> x;
  const double fs = 100.0;
  for (int i = 0; i < 2000; ++i) x.push_back(sadm_torque(i / fs, m));
  const auto sp = sim::amplitude_spectrum(x, fs);
  CHECK(sp.peak_bin(0.0) == sp.nearest_bin(2.0));
  CHECK(sp.amplitude[sp.nearest_bin(2.0)] == doctest::Approx(0.01).epsilon(1e-9));
  for (std::size_t k = 0; k < sp.amplitude.size(); ++k)
    if (k != sp.nearest_bin(2.0)) CHECK(sp.amplitude[k] < 1e-12);
  m.harmonics.push_back({3.0, 0.004, 1.0});
  for (double t : {0.0, 0.37, 1.91}) CHECK(sadm_torque(t, m) == doctest::Approx(sadm_torque(t + 0.5, m)).epsilon(1e-9));
}

TEST_CASE("second-order actuator response and stroke") {
  SecondOrderSpec spec{2.0 * kPi * 20.0, 0.7, 1e-3};
  const double dt = 1e-4;
  SecondOrderActuator fsm(spec, 2, dt);
  auto r = fsm.step(Eigen::Vector2d::Zero());
  CHECK(r.output.isZero(0.0));

  // Step inside the stroke: 2% settling near 4/(zeta w_n).
  const double u = 0.5e-3;
  double last_out = 0.0;
  for (int i = 1; i <= 20000; ++i) {
    r = fsm.step(Eigen::Vector2d(u, 0.0));
    if (std::abs(r.output(0) - u) > 0.02 * u) last_out = i * dt;
  }
  const double ts = 4.0 / (spec.damping * spec.natural_frequency);
  CHECK(last_out == doctest::Approx(ts).epsilon(0.2));
  CHECK(r.output(0) == doctest::Approx(u).epsilon(1e-9));

  // Exact discretization: compare one step against the analytic underdamped response.
  SecondOrderActuator one(spec, 1, 0.01);
  const double w = spec.natural_frequency, z = spec.damping, wd = w * std::sqrt(1 - z * z);
  const double y = one.step(Eigen::VectorXd::Constant(1, u)).output(0);
  const double oracle = u * (1.0 - std::exp(-z * w * 0.01) * (std::cos(wd * 0.01) + z * w / wd * std::sin(wd * 0.01)));
  CHECK(y == doctest::Approx(oracle).epsilon(1e-10));

  SecondOrderActuator big(spec, 2, dt);
  r = big.step(Eigen::Vector2d(5e-3, 0.0));
  CHECK(r.clipped);
  for (int i = 0; i < 20000; ++i) r = big.step(Eigen::Vector2d(5e-3, 0.0));
  CHECK(r.output(0) <= spec.stroke);
  CHECK(r.output(0) == doctest::Approx(spec.stroke).epsilon(1e-9));
}
