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

#include "spcm/error.hpp"
#include "spcm/sim/frequency_response.hpp"
#include "spcm/sim/integrator.hpp"
#include "spcm/sim/interconnect.hpp"
#include "spcm/sim/quaternion.hpp"
#include "spcm/sim/random.hpp"
#include "spcm/sim/schedule.hpp"
#include "spcm/sim/spectrum.hpp"

using namespace spcm;
using namespace spcm::sim;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorField linear_field(MatrixXd a) {
  return [a = std::move(a)](double, const VectorXd& x, const VectorXd&) -> VectorXd { return a * x; };
}

double decay_error(double dt) {
  MatrixXd a(1, 1);
  a << -1.0;
  auto traj = integrate_fixed_step(linear_field(a), VectorXd::Ones(1), dt, 1.0);
  return std::abs(traj.states.back()(0) - std::exp(-1.0));
}

StateSpace integrator(const std::string& in, const std::string& out, const std::string& x) {
  return StateSpace(MatrixXd::Zero(1, 1), MatrixXd::Ones(1, 1), MatrixXd::Ones(1, 1),
                    MatrixXd::Zero(1, 1), {x}, {in}, {out});
}

StateSpace random_system(Rng& rng, int n, const std::string& tag) {
  MatrixXd a(n, n), b(n, 1), c(1, n), d(1, 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = rng.normal() * 0.3;
    a(i, i) -= 2.0;
    b(i, 0) = rng.normal();
    c(0, i) = rng.normal();
  }
  d(0, 0) = rng.normal();
  Labels xs;
  for (int i = 0; i < n; ++i) xs.push_back(tag + "x" + std::to_string(i));
  return StateSpace(a, b, c, d, xs, {tag + "_in"}, {tag + "_out"});
}

}  // namespace

TEST_CASE("rk4 reproduces exp(-1) and identity dynamics") {
  CHECK(decay_error(0.01) < 1e-8);

  auto zero = [](double, const VectorXd& x, const VectorXd&) -> VectorXd { return VectorXd::Zero(x.size()); };
  VectorXd c(3);
  c << 1.5, -2.25, 1e-7;
  auto traj = integrate_fixed_step(zero, c, 0.1, 5.0);
  CHECK(traj.size() == 51);
  CHECK((traj.states.back() - c).norm() == 0.0);
}

TEST_CASE("rk4 step count is round(t_end/dt) on a uniform grid") {
  MatrixXd a = MatrixXd::Zero(1, 1);
  auto traj = integrate_fixed_step(linear_field(a), VectorXd::Zero(1), 0.3, 1.0);
  CHECK(traj.size() == 4);  // round(3.33) = 3 steps
  for (std::size_t k = 1; k < traj.size(); ++k) CHECK(traj.times[k] > traj.times[k - 1]);
}

TEST_CASE("rk4 conserves oscillator energy to 1e-9 relative") {
  // x'' = -w^2 x, energy oracle E = (v^2 + w^2 x^2) / 2
  const double w = 1.0;
  MatrixXd a(2, 2);
  a << 0.0, 1.0, -w * w, 0.0;
  VectorXd x0(2);
  x0 << 1.0, 0.0;
  auto energy = [w](const VectorXd& x) { return 0.5 * (x(1) * x(1) + w * w * x(0) * x(0)); };
  auto traj = integrate_fixed_step(linear_field(a), x0, 1e-3, 10.0);
  const double e0 = energy(x0);
  double worst = 0.0;
  for (const auto& x : traj.states) worst = std::max(worst, std::abs(energy(x) - e0) / e0);
  CHECK(worst < 1e-9);
}

TEST_CASE("rk4 convergence order is at least 3.8") {
  const double e1 = decay_error(1e-2), e2 = decay_error(5e-3), e3 = decay_error(2.5e-3);
  CHECK(std::log2(e1 / e2) >= 3.8);
  CHECK(std::log2(e2 / e3) >= 3.8);
}

TEST_CASE("integration reports divergence with its time") {
  MatrixXd a(1, 1);
  a << 800.0;
  try {
    integrate_fixed_step(linear_field(a), VectorXd::Ones(1), 0.1, 100.0);
    FAIL("expected divergence");
  } catch (const DivergedSimulation& e) {
    CHECK(e.time() > 0.0);
    CHECK(e.time() <= 100.0);
  }
  CHECK_THROWS_AS(integrate_fixed_step(linear_field(a), VectorXd::Ones(1), 0.0, 1.0), ConfigError);
}

TEST_CASE("step-size validation") {
  CHECK_NOTHROW(validate_step_size(100.0, 0.003));
  CHECK_THROWS_AS(validate_step_size(100.0, 0.004), ConfigError);
}

TEST_CASE("quaternion propagation") {
  const Quaternion q0(0.9, 0.1, -0.3, 0.2);
  const Quaternion qn = q0.normalized();
  SUBCASE("zero rate leaves q unchanged") {
    auto q = quat_propagate(qn, Eigen::Vector3d::Zero(), 0.1);
    CHECK((q.coeffs() - qn.coeffs()).norm() < 1e-15);
  }
  SUBCASE("quarter turn about z") {
    auto q = quat_propagate(Quaternion::Identity(), {0.0, 0.0, std::numbers::pi / 2}, 1.0);
    const Eigen::Vector3d x_rot = q * Eigen::Vector3d::UnitX();
    CHECK((x_rot - Eigen::Vector3d::UnitY()).norm() < 1e-14);
    CHECK(q.w() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  }
  SUBCASE("norm preserved per step and over 1e6 steps") {
    Rng rng(3);
    Quaternion q = qn;
    double worst = 0.0;
    for (int k = 0; k < 1000000; ++k) {
      Eigen::Vector3d w(rng.normal(), rng.normal(), rng.normal());
      q = quat_propagate(q, w, 1e-3);
      worst = std::max(worst, std::abs(q.norm() - 1.0));
    }
    CHECK(worst < 1e-12);
  }
  SUBCASE("log/exp round trip") {
    Eigen::Vector3d r(0.3, -1.1, 0.7);
    CHECK((quat_log(quat_exp(r)) - r).norm() < 1e-13);
  }
}

TEST_CASE("lti_connect: integrators in series give 1/s^2") {
  std::vector<StateSpace> blocks{integrator("u1", "y1", "x1"), integrator("u2", "y2", "x2")};
  std::vector<Connection> conns{{"y1", "u2"}};
  auto sys = lti_connect(blocks, conns, {"u1"}, {"y2"});
  CHECK(sys.num_states() == 2);
  for (double w : {0.1, 1.0, 7.0}) {
    auto g = sys.evaluate({0.0, w});
    CHECK(std::abs(g(0, 0) - std::complex<double>(-1.0 / (w * w), 0.0)) < 1e-12 / (w * w));
  }
}

TEST_CASE("lti_connect: integrator under unit negative feedback has its pole at -1") {
  auto neg = StateSpace::gain(-MatrixXd::Identity(1, 1), {"e"}, {"fb"});
  std::vector<StateSpace> blocks{integrator("u", "y", "x"), neg};
  std::vector<Connection> conns{{"y", "e"}, {"fb", "u"}};
  auto sys = lti_connect(blocks, conns, {"u"}, {"y"});
  auto p = sys.poles();
  REQUIRE(p.size() == 1);
  CHECK(std::abs(p(0) - std::complex<double>(-1.0, 0.0)) < 1e-14);
}

TEST_CASE("lti_connect errors") {
  std::vector<StateSpace> blocks{integrator("u1", "y1", "x1"), integrator("u2", "y2", "x2")};
  SUBCASE("missing input") {
    std::vector<Connection> conns{{"y1", "u3"}};
    CHECK_THROWS_AS(lti_connect(blocks, conns, {"u1"}, {"y2"}), LabelError);
  }
  SUBCASE("missing external output") {
    std::vector<Connection> conns;
    CHECK_THROWS_AS(lti_connect(blocks, conns, {"u1"}, {"nope"}), LabelError);
  }
  SUBCASE("duplicate labels across blocks") {
    std::vector<StateSpace> dup{integrator("u", "y", "x1"), integrator("u", "y2", "x2")};
    std::vector<Connection> conns;
    CHECK_THROWS_AS(lti_connect(dup, conns, {}, {}), LabelError);
  }
  SUBCASE("algebraic loop through two gains is named") {
    std::vector<StateSpace> gains{StateSpace::gain(MatrixXd::Constant(1, 1, 0.5), {"a_in"}, {"a_out"}),
                                  StateSpace::gain(MatrixXd::Constant(1, 1, 2.0), {"b_in"}, {"b_out"})};
    std::vector<Connection> conns{{"a_out", "b_in"}, {"b_out", "a_in"}};
    try {
      lti_connect(gains, conns, {}, {"a_out"});
      FAIL("expected algebraic loop");
    } catch (const AlgebraicLoopError& e) {
      const auto& loop = e.loop();
      CHECK(loop.front() == loop.back());
      CHECK(loop.size() == 5);
    }
  }
  SUBCASE("loop through a strictly proper block is fine") {
    std::vector<StateSpace> mixed{integrator("u", "y", "x"),
                                  StateSpace::gain(MatrixXd::Constant(1, 1, -3.0), {"g_in"}, {"g_out"})};
    std::vector<Connection> conns{{"y", "g_in"}, {"g_out", "u"}};
    auto sys = lti_connect(mixed, conns, {}, {"y"});
    CHECK(sys.poles()(0).real() == doctest::Approx(-3.0));
  }
}

TEST_CASE("lti_connect series equals the product of frequency responses") {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    auto g1 = random_system(rng, 3, "g1");
    auto g2 = random_system(rng, 4, "g2");
    std::vector<StateSpace> blocks{g1, g2};
    std::vector<Connection> conns{{"g1_out", "g2_in"}};
    auto sys = lti_connect(blocks, conns, {"g1_in"}, {"g2_out"});
    CHECK(sys.num_states() == 7);
    auto grid = logspace(1e-2, 1e2, 50);
    auto r = freq_response(sys, grid);
    auto r1 = freq_response(g1, grid);
    auto r2 = freq_response(g2, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto expected = r2[k].response(0, 0) * r1[k].response(0, 0);
      CHECK(std::abs(r[k].response(0, 0) - expected) < 1e-10 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("freq_response basics") {
  SUBCASE("first-order lag at its corner") {
    StateSpace g(-MatrixXd::Ones(1, 1), MatrixXd::Ones(1, 1), MatrixXd::Ones(1, 1), MatrixXd::Zero(1, 1));
    std::vector<double> w{1.0};
    auto r = freq_response(g, w);
    CHECK(std::abs(r[0].response(0, 0)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(r[0].singular_values(0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  }
  SUBCASE("pure gain is flat") {
    MatrixXd d(2, 2);
    d << 1.0, 2.0, 3.0, 4.0;
    auto g = StateSpace::gain(d);
    auto grid = logspace(1e-3, 1e3, 7);
    for (const auto& s : freq_response(g, grid)) {
      CHECK((s.response - d.cast<std::complex<double>>()).norm() == 0.0);
    }
  }
  SUBCASE("undamped pole is flagged, not thrown") {
    MatrixXd a(2, 2);
    a << 0.0, 1.0, -1.0, 0.0;
    StateSpace g(a, MatrixXd::Ones(2, 1), MatrixXd::Ones(1, 2), MatrixXd::Zero(1, 1));
    std::vector<double> w{0.5, 1.0, 2.0};
    auto r = freq_response(g, w);
    CHECK_FALSE(r[0].singular);
    CHECK(r[1].singular);
    CHECK_FALSE(r[2].singular);
  }
  SUBCASE("bad grid") {
    auto g = StateSpace::gain(MatrixXd::Ones(1, 1));
    std::vector<double> w{1.0, -1.0};
    CHECK_THROWS_AS(freq_response(g, w), ConfigError);
  }
}

TEST_CASE("two-mode flexible model peaks at its eigenfrequencies") {
  // Modal model: q_i'' + 2 z w_i q_i' + w_i^2 q_i = u, y = sum q_i
  const double w1 = 3.0, w2 = 17.0, z = 0.005;
  MatrixXd a = MatrixXd::Zero(4, 4);
  a(0, 1) = 1.0;
  a(1, 0) = -w1 * w1;
  a(1, 1) = -2 * z * w1;
  a(2, 3) = 1.0;
  a(3, 2) = -w2 * w2;
  a(3, 3) = -2 * z * w2;
  MatrixXd b(4, 1);
  b << 0, 1, 0, 1;
  MatrixXd c(1, 4);
  c << 1, 0, 1, 0;
  StateSpace g(a, b, c, MatrixXd::Zero(1, 1));

  // Eigenvalue oracle: |lambda| of each conjugate pair.
  std::vector<double> modes;
  auto p = g.poles();
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i).imag() > 0) modes.push_back(std::abs(p(i)));
  }
  REQUIRE(modes.size() == 2);

  auto grid = logspace(1.0, 50.0, 4000);
  auto r = freq_response(g, grid);
  std::vector<double> peaks;
  for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
    const double m = r[k].singular_values(0);
    if (m > r[k - 1].singular_values(0) && m > r[k + 1].singular_values(0)) peaks.push_back(grid[k]);
  }
  REQUIRE(peaks.size() == 2);
  const double step = grid[1] / grid[0];
  for (std::size_t i = 0; i < 2; ++i) {
    const double ratio = std::max(peaks[i], modes[i]) / std::min(peaks[i], modes[i]);
    CHECK(ratio <= step * (1 + 1e-12));
  }
}

TEST_CASE("multirate schedule") {
  std::vector<DeviceRate> rates{{"str", 10.0}, {"ctrl", 1000.0}};
  auto sched = multirate_schedule(rates, 1.0, 1e-3);
  CHECK(sched.device("str").period_steps == 100);
  CHECK(sched.device("ctrl").period_steps == 1);
  auto ticks = sched.ticks("str");
  CHECK(ticks.size() == 10);
  CHECK(ticks[3] == 300);

  std::vector<DeviceRate> bad{{"fgs", 3.0}, {"gyro", 7.0}, {"ok", 50.0}};
  try {
    multirate_schedule(bad, 1.0, 1e-3);
    FAIL("expected error");
  } catch (const ConfigError& e) {
    CHECK(e.messages().size() == 2);
  }

  ZeroOrderHold<double> hold(0.0);
  double seen = 0.0;
  for (std::uint64_t k = 0; k < 300; ++k) {
    const double v = hold.update(sched.device("str").is_tick(k), static_cast<double>(k));
    if (k >= 100 && k < 200) CHECK(v == 100.0);
    seen = v;
  }
  CHECK(seen == 200.0);
}

TEST_CASE("amplitude spectrum reads a tone on its bin") {
  const double fs = 100.0, f = 12.5, a = 0.7;
  std::vector<double> x(800);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = a * std::sin(2 * std::numbers::pi * f * k / fs) + 0.1;
  auto s = amplitude_spectrum(x, fs);
  CHECK(s.frequency[s.peak_bin(1.0)] == doctest::Approx(f));
  CHECK(s.amplitude[s.nearest_bin(f)] == doctest::Approx(a).epsilon(1e-12));
  CHECK(s.amplitude[0] == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("seeded generator is reproducible and derived seeds differ") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
}

TEST_CASE("Hessenberg evaluator matches the dense solve") {
  Rng rng(8);
  const Eigen::Index n = 40;
  Eigen::MatrixXd a = Eigen::MatrixXd::Random(n, n) - 6.0 * Eigen::MatrixXd::Identity(n, n);
  const StateSpace sys(a, Eigen::MatrixXd::Random(n, 3), Eigen::MatrixXd::Random(2, n), Eigen::MatrixXd::Random(2, 3));
  const FrequencyEvaluator eval(sys);
  for (double w : logspace(1e-2, 1e3, 50)) {
    const Eigen::MatrixXcd ref = sys.evaluate({0.0, w});
    CHECK((eval.at(w) - ref).norm() < 1e-10 * ref.norm());
  }
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(1, 1), one = Eigen::MatrixXd::Ones(1, 1);
  const FrequencyEvaluator integrator(StateSpace(z, one, one, z));
  CHECK(std::isnan(integrator({0.0, 0.0})(0, 0).real()));
}
