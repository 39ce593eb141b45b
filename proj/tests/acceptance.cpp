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


// Acceptance run: one PASS/FAIL line per criterion. Exit status is zero when
// the failing set equals --expect-fail (empty by default).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "spcm/actuators/thrusters.hpp"
#include "spcm/error.hpp"
#include "spcm/io/run_artifacts.hpp"
#include "spcm/io/scenario_file.hpp"
#include "spcm/metrics/campaign.hpp"
#include "spcm/metrics/margins.hpp"
#include "spcm/metrics/pointing.hpp"
#include "spcm/metrics/waterfall.hpp"
#include "spcm/mission/plant.hpp"
#include "spcm/mission/scenario.hpp"
#include "spcm/mission/simulator.hpp"
#include "spcm/sim/frequency_response.hpp"
#include "spcm/sim/integrator.hpp"
#include "spcm/sim/random.hpp"
#include "spcm/sim/spectrum.hpp"
#include "spcm/structure/structure.hpp"

using namespace spcm;
namespace fs = std::filesystem;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Context {
  std::string scenario_path;
  fs::path work;
  mission::Scenario scenario;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- 1: integrator order ----------------------------------------------------

Outcome integrator_order(const Context&) {
  auto decay = [](double, const VectorXd& x, const VectorXd&) -> VectorXd { return -x; };
  std::vector<double> err;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    const auto traj = sim::integrate_fixed_step(decay, VectorXd::Ones(1), dt, 1.0);
    err.push_back(std::abs(traj.states.back()(0) - std::exp(-1.0)));
  }
  const double p1 = std::log2(err[0] / err[1]), p2 = std::log2(err[1] / err[2]);
  return {p1 >= 3.8 && p2 >= 3.8, fmt::format("orders {:.3f}, {:.3f}", p1, p2)};
}

// ---- 2: structural passivity ----------------------------------------------

// Symmetric positive semidefinite matrix sqrt(N) Q diag(d) Q^T sqrt(N) around a
// nominal diagonal N, some directions left undamped/unstiffened when allowed.
structure::Matrix6 random_psd(sim::Rng& rng, const structure::Matrix6& nominal, bool allow_zero) {
  const Eigen::Matrix<double, 6, 6> g = Eigen::Matrix<double, 6, 6>::NullaryExpr([&] { return rng.normal(); });
  const Eigen::HouseholderQR<Eigen::Matrix<double, 6, 6>> qr(g);
  const Eigen::Matrix<double, 6, 6> q = qr.householderQ();
  Eigen::Matrix<double, 6, 1> d;
  for (int i = 0; i < 6; ++i)
    d(i) = (allow_zero && rng.uniform(0.0, 1.0) < 0.2) ? 0.0 : std::pow(10.0, rng.uniform(-1.0, 1.0));
  Eigen::Matrix<double, 6, 1> s = nominal.diagonal().cwiseAbs().cwiseSqrt();
  for (int i = 0; i < 6; ++i)
    if (s(i) == 0.0) s(i) = 1.0;
  const structure::Matrix6 m = s.asDiagonal() * (q * d.asDiagonal() * q.transpose()) * s.asDiagonal();
  return 0.5 * (m + m.transpose());
}

double min_eig_rel(const MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(a, Eigen::EigenvaluesOnly);
  const double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  return es.eigenvalues().minCoeff() / scale;
}

// Elastic poles from the second-order matrices: hub coordinates condensed out
// of the mass matrix, then the mass-normalized companion form.
double max_elastic_real_part(const structure::CoupledLinearModel& m) {
  const Eigen::Index n = m.mass.rows(), ne = n - 6;
  if (ne == 0) return 0.0;
  const MatrixXd mhh = m.mass.topLeftCorner(6, 6), mhe = m.mass.topRightCorner(6, ne);
  const MatrixXd ms = m.mass.bottomRightCorner(ne, ne) - mhe.transpose() * mhh.ldlt().solve(mhe);
  const Eigen::LLT<MatrixXd> llt(ms);
  const MatrixXd l = llt.matrixL();
  auto normalize = [&](const MatrixXd& x) -> MatrixXd {
    const MatrixXd y = l.triangularView<Eigen::Lower>().solve(x);
    return l.triangularView<Eigen::Lower>().solve(y.transpose()).transpose();
  };
  MatrixXd a = MatrixXd::Zero(2 * ne, 2 * ne);
  a.topRightCorner(ne, ne).setIdentity();
  a.bottomLeftCorner(ne, ne) = -normalize(m.stiffness.bottomRightCorner(ne, ne));
  a.bottomRightCorner(ne, ne) = -normalize(m.damping.bottomRightCorner(ne, ne));
  const Eigen::EigenSolver<MatrixXd> es(a, false);
  return es.eigenvalues().real().maxCoeff();
}

Outcome passivity(const Context& ctx) {
  const auto base = mission::build_structure(ctx.scenario);
  sim::Rng rng(0x5EED2);
  double worst = -1e300;
  std::size_t bad = 0;
  std::string first_problem;
  for (int trial = 0; trial < 100; ++trial) {
    auto sc = base;
    for (auto& am : sc.appendages) {
      for (Eigen::Index i = 0; i < am.appendage.damping.size(); ++i)
        am.appendage.damping(i) = 0.05 * (1.0 - rng.uniform(0.0, 1.0));  // (0, 0.05]
      if (am.sadm) {
        am.sadm->stiffness *= std::pow(10.0, rng.uniform(-1.0, 1.0));
        am.sadm->damping *= rng.uniform(0.0, 2.0);
      }
    }
    if (sc.payload) {
      for (Eigen::Index i = 0; i < sc.payload->body.damping.size(); ++i)
        sc.payload->body.damping(i) = 0.05 * (1.0 - rng.uniform(0.0, 1.0));
      sc.payload->isolator.stiffness = random_psd(rng, sc.payload->isolator.stiffness, false);
      sc.payload->isolator.damping = random_psd(rng, sc.payload->isolator.damping, true);
    }
    if (sc.slosh) sc.slosh->damping = 0.05 * (1.0 - rng.uniform(0.0, 1.0));
    for (auto& w : sc.wheels) {
      if (!w.isolator_stiffness) continue;
      w.isolator_stiffness = random_psd(rng, *w.isolator_stiffness, false);
      w.isolator_damping = random_psd(rng, *w.isolator_damping, true);
    }
    const std::array<double, 2> theta{rng.uniform(0.0, 2.0 * kPi), rng.uniform(0.0, 2.0 * kPi)};
    try {
      const auto m = structure::assemble(sc, theta);
      const auto ne = m.mass.rows() - 6;
      const bool hub_free = m.stiffness.topRows(6).norm() == 0.0 && m.damping.topRows(6).norm() == 0.0;
      const bool psd = min_eig_rel(m.stiffness.bottomRightCorner(ne, ne)) > -1e-9 &&
                       min_eig_rel(m.damping.bottomRightCorner(ne, ne)) > -1e-9 && min_eig_rel(m.mass) > 0.0;
      const double re = std::max(max_elastic_real_part(m), m.elastic_poles.real().maxCoeff());
      worst = std::max(worst, re);
      if (!hub_free || !psd || re > 1e-9) {
        ++bad;
        if (first_problem.empty())
          first_problem = fmt::format("trial {}: hub_free={} psd={} max Re={:.3g}", trial, hub_free, psd, re);
      }
    } catch (const Error& e) {
      ++bad;
      if (first_problem.empty()) first_problem = fmt::format("trial {}: {}", trial, e.what());
    }
  }
  std::string d = fmt::format("100 assemblies, {} bad, max Re(lambda) {:.3g}", bad, worst);
  if (!first_problem.empty()) d += "; " + first_problem;
  return {bad == 0, d};
}

// ---- 3: wheel-mount transfer and the drive-angle family ------------------

Outcome transfer_family(const Context& ctx) {
  const auto sc = mission::build_structure(ctx.scenario);
  const auto grid = sim::logspace(2.0 * kPi * 0.05, 2.0 * kPi * 50.0, 1500);
  auto nearest = [&](double w) {
    const auto it = std::lower_bound(grid.begin(), grid.end(), w);
    std::size_t k = static_cast<std::size_t>(it - grid.begin());
    if (k == grid.size() || (k > 0 && std::log(w / grid[k - 1]) < std::log(grid[k] / w))) --k;
    return k;
  };
  // A peak belongs to a mode when it is within one grid point of |lambda|, or,
  // for a well damped mode whose acceleration peak sits above |lambda|, inside
  // its half-power band.
  struct PeakTally {
    std::size_t peaks = 0, on_grid = 0, in_band = 0, unmatched = 0;
  };
  auto curve = [&](double deg, PeakTally* tally) {
    const auto m = structure::assemble(sc, {deg * kPi / 180.0, deg * kPi / 180.0});
    const auto resp = sim::freq_response(structure::wheel_mount_transfer(m, 0), grid);
    std::vector<double> db;
    for (const auto& r : resp) db.push_back(20.0 * std::log10(r.singular_values(0)));
    if (tally) {
      for (std::size_t i = 1; i + 1 < db.size(); ++i) {
        if (!(db[i] > db[i - 1] && db[i] > db[i + 1])) continue;
        ++tally->peaks;
        bool grid_ok = false, band_ok = false;
        for (Eigen::Index j = 0; j < m.elastic_poles.size(); ++j) {
          const auto p = m.elastic_poles(j);
          if (p.imag() <= 0.0) continue;
          const double wn = std::abs(p), zeta = -p.real() / wn;
          const std::size_t k = nearest(wn);
          grid_ok = grid_ok || (k > i ? k - i : i - k) <= 1;
          band_ok = band_ok || std::abs(grid[i] - wn) <= zeta * wn;
        }
        if (grid_ok)
          ++tally->on_grid;
        else if (band_ok)
          ++tally->in_band;
        else
          ++tally->unmatched;
      }
    }
    return db;
  };
  auto max_dev = [](const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
  };

  PeakTally tally;
  std::vector<std::vector<double>> family;
  for (int deg = 0; deg <= 90; deg += 10) family.push_back(curve(deg, &tally));
  double worst = 0.0;
  int worst_at = 0;
  std::string steps;
  for (std::size_t k = 1; k < family.size(); ++k) {
    const double d = max_dev(family[k - 1], family[k]);
    steps += fmt::format("{}{:.1f}", k == 1 ? "" : " ", d);
    if (d > worst) {
      worst = d;
      worst_at = static_cast<int>(10 * (k - 1));
    }
  }
  // Refinement at the worst interval: a continuous family shrinks with the step.
  const auto& c0 = family[static_cast<std::size_t>(worst_at / 10)];
  const double d1 = max_dev(c0, curve(worst_at + 1.0, nullptr));
  const double d01 = max_dev(c0, curve(worst_at + 0.1, nullptr));
  const bool peaks_ok = tally.unmatched == 0 && tally.peaks >= 3 * family.size();
  return {peaks_ok && worst < 6.0,
          fmt::format("{} peaks: {} within one grid point of a mode, {} in a damped mode's half-power band, "
                      "{} unmatched; adjacent 10 deg max dev [dB] {}; worst {:.1f} dB from {} deg, "
                      "which shrinks to {:.2f} dB at 1 deg and {:.2f} dB at 0.1 deg steps",
                      tally.peaks, tally.on_grid, tally.in_band, tally.unmatched, steps, worst, worst_at, d1, d01)};
}

// ---- 4: waterfall ----------------------------------------------------------

Outcome waterfall_map(const Context& ctx) {
  const auto sc = mission::build_structure(ctx.scenario);
  const auto& wheel = ctx.scenario.spacecraft.wheels.wheel;
  metrics::WaterfallOptions o;
  for (int i = 0; i <= 50; ++i) o.speeds_hz.push_back(10.0 + i);
  o.component = 3;  // tx in wheel axes: dynamic imbalance and isolator rocking
  const auto map = metrics::waterfall(sc, ctx.scenario.spacecraft.theta, wheel, o);

  std::size_t off_line = 0;
  double worst_ratio = 0.0;
  for (std::size_t r = 0; r < map.speeds_hz.size(); ++r) {
    const auto ri = static_cast<Eigen::Index>(r);
    // Strongest line below 1.5x the speed is the fundamental.
    const auto hi = static_cast<Eigen::Index>(std::floor(1.5 * map.speeds_hz[r] / o.resolution));
    Eigen::Index p;
    map.source.row(ri).head(hi).maxCoeff(&p);
    if (std::abs(map.freqs_hz[static_cast<std::size_t>(p)] - map.speeds_hz[r]) > o.resolution) ++off_line;
    const double omega = 2.0 * kPi * map.speeds_hz[r];
    worst_ratio = std::max(worst_ratio, std::abs(map.source(ri, p) / (wheel.dynamic_imbalance * omega * omega) - 1.0));
  }

  // Ridge in the broadband map: fixed in speed, on an assembled mode, and
  // close to the rocking mode of the wheel on its isolator over a fixed base.
  std::set<double> ridges;
  for (Eigen::Index r = 0; r < map.floor.rows(); ++r) {
    Eigen::Index p;
    map.floor.row(r).maxCoeff(&p);
    ridges.insert(map.freqs_hz[static_cast<std::size_t>(p)]);
  }
  const double ridge = *ridges.begin();
  const auto model = structure::assemble(sc, ctx.scenario.spacecraft.theta);
  double to_mode = 1e300;
  for (double f : model.flexible_frequencies()) to_mode = std::min(to_mode, std::abs(f / (2.0 * kPi) - ridge));
  const auto& w = sc.wheels[0];
  // Rocking about wheel x: the tx stiffness against the transverse inertia.
  const double rocking = std::sqrt((*w.isolator_stiffness)(3, 3) / w.inertia(0)) / (2.0 * kPi);

  const bool ok = off_line == 0 && worst_ratio < 0.02 && ridges.size() == 1 && to_mode <= o.resolution &&
                  std::abs(ridge / rocking - 1.0) < 0.05;
  return {ok, fmt::format("fundamental off its bin at {} of {} speeds; amplitude/Omega^2 spread {:.2g}; "
                          "ridge at {} Hz ({} distinct), {:.3f} Hz from an assembled mode, isolator rocking {:.2f} Hz",
                          off_line, map.speeds_hz.size(), worst_ratio, ridge, ridges.size(), to_mode, rocking)};
}

// ---- 5: time-domain imbalance against the linear map ----------------------

Outcome imbalance_cross_check(const Context& ctx) {
  const auto sc = mission::build_structure(ctx.scenario);
  const auto model = structure::assemble(sc, ctx.scenario.spacecraft.theta);
  actuators::WheelFidelity fid;
  fid.saturation = fid.friction = fid.spikes = fid.noise = false;
  const mission::Plant plant(model, ctx.scenario.spacecraft.wheels.pyramid(), fid);

  const double f_spin = 30.0, dt = 1e-3, span = 100.0;
  auto x = plant.initial_state(sim::Quaternion::Identity(), Eigen::Vector4d(2.0 * kPi * f_spin, 0.0, 0.0, 0.0));
  const auto rows = plant.output_rows({"w1_mount_tx"});
  const VectorXd u = VectorXd::Zero(static_cast<Eigen::Index>(plant.input_size()));
  const auto n = static_cast<std::size_t>(std::llround(span / dt));
  std::vector<double> sig;
  sig.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    plant.step(x, u, Eigen::Vector4d::Zero(), dt);
    sig.push_back(plant.outputs(rows, x)(0));
  }
  const auto spec = sim::amplitude_spectrum(sig, 1.0 / dt);
  const double fft = spec.amplitude[spec.nearest_bin(f_spin)];

  metrics::WaterfallOptions o;
  o.speeds_hz = {f_spin};
  const auto map = metrics::waterfall(sc, ctx.scenario.spacecraft.theta, ctx.scenario.spacecraft.wheels.wheel, o);
  const double lin = map.transmitted(0, static_cast<Eigen::Index>(std::llround(f_spin / o.resolution)));
  const double err = std::abs(fft / lin - 1.0);
  return {err < 0.05, fmt::format("{} Hz: FFT {:.5e} N m, waterfall {:.5e} N m, difference {:.2g}", f_spin, fft, lin, err)};
}

// ---- 6: PWM and minimum impulse bit ---------------------------------------

Outcome pwm(const Context& ctx) {
  const auto& t = ctx.scenario.spacecraft.rcs.prototype;
  sim::Rng rng(0xB17);
  const double full = t.thrust * t.pwm_period;
  std::size_t short_pulses = 0, fired = 0;
  double err_sum = 0.0;
  const int cycles = 10000;
  for (int i = 0; i < cycles; ++i) {
    const double c = rng.uniform(0.0, full);
    const auto p = actuators::pwm_modulate(c, t);
    if (p.width() > 0.0) {
      ++fired;
      if (p.width() < t.mib / t.thrust - 1e-12) ++short_pulses;
    }
    err_sum += t.thrust * p.width() - c;
  }
  const double mean_err = err_sum / cycles, bound = t.quantum * t.thrust;
  return {short_pulses == 0 && std::abs(mean_err) <= bound,
          fmt::format("{} cycles, {} pulses, {} shorter than MIB/F; mean impulse error {:.3g} N s (bound {:.3g})",
                      cycles, fired, short_pulses, mean_err, bound)};
}

// ---- 7: pointing metric identities ----------------------------------------

metrics::PointingRecord record(double rate, std::size_t n, int axes, const std::function<double(double, int)>& f) {
  metrics::PointingRecord r;
  r.sample_rate = rate;
  r.samples.resize(static_cast<Eigen::Index>(n), axes);
  for (std::size_t k = 0; k < n; ++k)
    for (int a = 0; a < axes; ++a) r.samples(static_cast<Eigen::Index>(k), a) = f(static_cast<double>(k) / rate, a);
  return r;
}

template <class F>
bool throws_config(F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    return true;
  }
  return false;
}

Outcome metric_identities(const Context&) {
  std::vector<std::string> failed;
  auto check = [&](bool ok, const char* what) {
    if (!ok) failed.emplace_back(what);
  };
  const double fs = 100.0;

  const auto c = record(fs, 1000, 2, [](double, int a) { return a == 0 ? 3e-6 : -4e-6; });
  const auto ac = metrics::ape(c);
  check((ac.norm.array() - 5e-6).abs().maxCoeff() < 1e-18, "APE constant");
  check(metrics::rpe(c, 1.0).summary < 1e-18, "RPE constant");
  check(metrics::pde(c, 1.0, 2.0).summary < 1e-18, "PDE constant");

  const double a = 2e-5, f = 1.3;
  const auto s = record(fs, 2000, 1, [&](double t, int) { return a * std::sin(2.0 * kPi * f * t); });
  const double sample_slack = a * (1.0 - std::cos(kPi * f / fs));
  const double sm = metrics::ape(s).summary;
  check(sm <= a + 1e-18 && sm >= a - sample_slack, "APE sinusoid");

  const auto mixed = record(fs, 500, 3, [](double t, int ax) { return std::sin(t * (ax + 1)) * 1e-5 * (ax + 1); });
  const auto am = metrics::ape(mixed);
  bool consistent = true;
  for (Eigen::Index k = 0; k < am.norm.size(); ++k)
    for (int ax = 0; ax < 3; ++ax) consistent = consistent && am.norm(k) + 1e-18 >= std::abs(am.axes(k, ax));
  check(consistent && am.summary + 1e-18 >= am.axis_summary.maxCoeff(), "APE axes vs norm");

  const double r = 2e-4, win = 1.0, gap = 3.0;
  const auto ramp = record(fs, 2000, 1, [&](double t, int) { return r * t; });
  check(std::abs(metrics::rpe(ramp, win).summary - r * win / 2.0) < 1e-9, "RPE ramp");
  const auto pr = metrics::pde(ramp, win, gap);
  check((pr.norm.array() - r * (gap + win)).abs().maxCoeff() < 1e-9, "PDE ramp (every pair)");

  const auto fast = record(1000.0, 20001, 1, [&](double t, int) { return a * std::sin(2.0 * kPi * 5.0 * t); });
  check(std::abs(metrics::rpe(fast, 10.0).summary / a - 1.0) < 0.02, "RPE fast sinusoid");

  sim::Rng rng(77);
  const auto noise = record(fs, 200000, 1, [&](double, int) { return rng.normal() * 1e-6; });
  const double p1 = metrics::pde(noise, 0.1, 1.0).summary, p2 = metrics::pde(noise, 1.0, 1.0).summary,
               p3 = metrics::pde(noise, 10.0, 1.0).summary, p4 = metrics::pde(noise, 100.0, 1.0).summary;
  check(p1 > p2 && p2 > p3 && p3 > p4, "PDE white noise trend");

  metrics::PointingRecord empty;
  empty.sample_rate = fs;
  check(throws_config([&] { metrics::ape(empty); }), "APE empty record");
  const auto shortrec = record(fs, 50, 1, [](double, int) { return 0.0; });
  check(throws_config([&] { metrics::rpe(shortrec, 1.0); }), "RPE window too long");
  check(throws_config([&] { metrics::pde(shortrec, 0.2, 0.2); }), "PDE record too short");

  std::string d = failed.empty() ? std::string("12 identities hold") : "failed:";
  for (const auto& x : failed) d += " [" + x + "]";
  return {failed.empty(), d};
}

// ---- 8: margins -------------------------------------------------------------

Outcome margin_oracle(const Context&) {
  sim::Rng rng(808);
  double worst_pm = 0.0, worst_dm = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double pm = rng.uniform(20.0, 80.0);
    const double wc = std::pow(10.0, rng.uniform(-2.0, 1.0));
    // L = k / (s (s + a)): phase at wc is -90 - atan(wc / a), |L(wc)| = 1.
    const double a = wc / std::tan((90.0 - pm) * kPi / 180.0);
    const double k = wc * std::sqrt(wc * wc + a * a);
    MatrixXd A(2, 2), B(2, 1), C(1, 2), D = MatrixXd::Zero(1, 1);
    A << 0.0, 1.0, 0.0, -a;
    B << 0.0, k;
    C << 1.0, 0.0;
    const auto m = metrics::classical_margins(sim::StateSpace(A, B, C, D));
    worst_pm = std::max(worst_pm, std::abs(m.phase_margin_deg - pm));
    worst_dm = std::max(worst_dm, std::abs(m.delay_margin / (pm * kPi / 180.0 / wc) - 1.0));
  }
  return {worst_pm < 0.5 && worst_dm < 0.01,
          fmt::format("20 loops, worst PM error {:.2g} deg, worst delay margin error {:.2g}", worst_pm, worst_dm)};
}

// ---- 9: end-to-end mission --------------------------------------------------

std::string slurp(const fs::path& p) { return io::read_text(p); }

Outcome mission_run(const Context& ctx) {
  const auto loaded = io::load_scenario_file(ctx.scenario_path);
  const auto t0 = std::chrono::steady_clock::now();
  const auto a = io::run(loaded, ctx.work / "mission_a");
  const double runtime = seconds_since(t0);
  const auto b = io::run(loaded, ctx.work / "mission_b");
  const auto& sc = a.result.score;
  bool same = true;
  for (const char* f : {io::kTimeseriesFile, io::kEventsFile, io::kReportFile, io::kManifestFile})
    same = same && slurp(a.dir / f) == slurp(b.dir / f);
  std::size_t reached = 0;
  for (const auto& p : sc.phases) reached += p.reached ? 1 : 0;
  const bool ok = !a.result.diverged && sc.completed && sc.t3_achieved > 0.0 && same && runtime < 300.0;
  return {ok, fmt::format("{}/6 phases, t3 {:.2f} of {:.0f} s, rerun byte-identical: {}, one run {:.1f} s", reached,
                          sc.t3_achieved, sc.t3_planned, same ? "yes" : "no", runtime)};
}

// ---- 10: Monte Carlo --------------------------------------------------------

bool same_runs(const metrics::CampaignResult& a, const metrics::CampaignResult& b) {
  if (a.runs.size() != b.runs.size()) return false;
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    const auto &x = a.runs[i], &y = b.runs[i];
    if (x.seed != y.seed || x.values != y.values || x.score != y.score || x.diverged != y.diverged) return false;
  }
  return true;
}

Outcome monte_carlo(const Context& ctx) {
  const auto& s = ctx.scenario;
  const std::uint64_t master = s.seed;
  const auto serial = metrics::monte_carlo(s, s.uncertain, 50, master, 1);
  const auto parallel = metrics::monte_carlo(s, s.uncertain, 50, master, 4);

  std::vector<double> ms, mp;
  for (const auto& r : serial.runs) ms.push_back(r.score);
  for (const auto& r : parallel.runs) mp.push_back(r.score);
  std::sort(ms.begin(), ms.end());
  std::sort(mp.begin(), mp.end());
  const bool multiset = ms == mp;
  const bool worst_same = serial.summary.worst == parallel.summary.worst &&
                          serial.worst().values == parallel.worst().values &&
                          serial.worst().score == parallel.worst().score;
  const bool complete = serial.runs.size() == 50 && serial.summary.failed == 0;

  // Letting the isolator damping reach zero must expose a worse case.
  auto widened = s.uncertain;
  for (auto& p : widened)
    if (p.path == "payload.isolator.damping_scale") p.min = 0.0;
  const auto wide = metrics::monte_carlo(s, widened, 50, master, 0);
  const bool worse = wide.worst().score < serial.worst().score;

  std::string values;
  for (std::size_t k = 0; k < serial.parameters.size(); ++k)
    values += fmt::format("{}{}={:.4f}", k ? ", " : "", serial.parameters[k], serial.worst().values[k]);
  return {complete && multiset && worst_same && same_runs(serial, parallel) && worse,
          fmt::format("master seed {}: {} runs, {} diverged, mean t3 {:.2f} s; serial vs 4 threads identical: {}; "
                      "worst run {} t3 {:.2f} s ({}); damping min 0 worst {:.2f} s (run {})",
                      master, serial.runs.size(), serial.summary.diverged, serial.summary.mean,
                      multiset && same_runs(serial, parallel) ? "yes" : "no", serial.summary.worst,
                      serial.worst().score, values, wide.worst().score, wide.summary.worst)};
}

struct Criterion {
  int id;
  const char* title;
  double budget;  // s, 0 = none
  Outcome (*run)(const Context&);
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SPCM acceptance criteria"};
  Context ctx;
  ctx.scenario_path = SPCM_DATA_DIR "/default_scenario.yaml";
  std::string work = "acceptance_work";
  std::vector<int> expect_fail, only;
  app.add_option("--scenario", ctx.scenario_path, "Scenario file");
  app.add_option("--work-dir", work, "Scratch directory for run artifacts");
  app.add_option("--expect-fail", expect_fail, "Criteria known to fail; exit status ignores them")->delimiter(',');
  app.add_option("--only", only, "Run just these criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  ctx.work = work;
  try {
    ctx.scenario = io::load_scenario(ctx.scenario_path);
    fs::create_directories(ctx.work);
  } catch (const std::exception& e) {
    fmt::print(stderr, "acceptance: {}\n", e.what());
    return 2;
  }

  const std::vector<Criterion> criteria = {
      {1, "integrator order", 1.0, integrator_order},
      {2, "structural passivity", 30.0, passivity},
      {3, "wheel-mount transfer family", 30.0, transfer_family},
      {4, "waterfall map", 60.0, waterfall_map},
      {5, "imbalance time/frequency cross-check", 0.0, imbalance_cross_check},
      {6, "PWM and minimum impulse bit", 0.0, pwm},
      {7, "pointing metric identities", 0.0, metric_identities},
      {8, "margin oracle", 0.0, margin_oracle},
      {9, "end-to-end mission", 0.0, mission_run},
      {10, "Monte Carlo campaign", 0.0, monte_carlo},
  };

  std::set<int> failed;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double t = seconds_since(t0);
    if (c.budget > 0.0 && t >= c.budget) {
      o.pass = false;
      o.detail += fmt::format("; over the {:.0f} s budget", c.budget);
    }
    if (!o.pass) failed.insert(c.id);
    fmt::print("criterion {:2d} {}: {} ({:.2f} s) {}\n", c.id, o.pass ? "PASS" : "FAIL", c.title, t, o.detail);
    std::fflush(stdout);
  }

  std::set<int> expected(expect_fail.begin(), expect_fail.end());
  if (!only.empty()) {
    std::set<int> sel(only.begin(), only.end()), keep;
    std::set_intersection(expected.begin(), expected.end(), sel.begin(), sel.end(), std::inserter(keep, keep.end()));
    expected = keep;
  }
  fmt::print("{} of {} criteria passed\n", static_cast<int>(only.empty() ? criteria.size() : only.size()) -
                                                static_cast<int>(failed.size()),
             only.empty() ? criteria.size() : only.size());
  if (failed != expected) {
    if (!expected.empty()) fmt::print("failing set differs from --expect-fail\n");
    return 1;
  }
  return 0;
}
