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


#include "spcm/metrics/margins.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "spcm/error.hpp"
#include "spcm/sim/frequency_response.hpp"

namespace spcm::metrics {

namespace {

using cd = std::complex<double>;

cd siso(const sim::StateSpace& l, double w) { return l.evaluate(cd(0.0, w))(0, 0); }

// Bisection on a sign change of f between a and b (log-spaced midpoint).
template <typename F>
double refine(F f, double a, double b) {
  double fa = f(a);
  for (int i = 0; i < 80; ++i) {
    const double m = std::sqrt(a * b);
    const double fm = f(m);
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
    if (b / a - 1.0 < 1e-14) break;
  }
  return std::sqrt(a * b);
}

double wrap_deg(double deg) {
  while (deg > 180.0) deg -= 360.0;
  while (deg <= -180.0) deg += 360.0;
  return deg;
}

std::vector<double> grid_or_default(const sim::StateSpace& loop, std::span<const double> grid) {
  if (!grid.empty()) return {grid.begin(), grid.end()};
  return default_margin_grid(loop);
}

double sens_peak(const sim::StateSpace& l, double w, double shift) {
  const auto n = static_cast<Eigen::Index>(l.num_outputs());
  const Eigen::MatrixXcd lj = l.evaluate(cd(0.0, w));
  const Eigen::MatrixXcd s = (Eigen::MatrixXcd::Identity(n, n) + lj).inverse();
  const Eigen::MatrixXcd m = s - shift * Eigen::MatrixXcd::Identity(n, n);
  if (n == 1) return std::abs(m(0, 0));
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

// Max over the grid, then golden-section refinement around the best point.
std::pair<double, double> peak(const sim::StateSpace& l, const std::vector<double>& grid, double shift) {
  std::size_t best = 0;
  double v = -1.0;
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    vals[i] = sens_peak(l, grid[i], shift);
    if (vals[i] > v) {
      v = vals[i];
      best = i;
    }
  }
  double a = std::log(grid[best > 0 ? best - 1 : 0]);
  double b = std::log(grid[std::min(best + 1, grid.size() - 1)]);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = sens_peak(l, std::exp(c), shift), fd = sens_peak(l, std::exp(d), shift);
  for (int i = 0; i < 60 && b - a > 1e-12; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = sens_peak(l, std::exp(c), shift);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = sens_peak(l, std::exp(d), shift);
    }
  }
  const double w = std::exp(0.5 * (a + b));
  const double fw = sens_peak(l, w, shift);
  if (fw > v) return {fw, w};
  return {v, grid[best]};
}

}  // namespace

std::vector<double> default_margin_grid(const sim::StateSpace& loop, std::size_t points) {
  double lo = 1.0, hi = 1.0;
  const Eigen::VectorXcd p = loop.poles();
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double m = std::abs(p(i));
    if (m < 1e-12) continue;
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  return sim::logspace(lo * 1e-3, hi * 1e3, points);
}

LoopMargins classical_margins(const sim::StateSpace& loop, std::span<const double> grid_in) {
  if (loop.num_inputs() != 1 || loop.num_outputs() != 1) throw DimensionError("classical margins need a SISO loop");
  const std::vector<double> grid = grid_or_default(loop, grid_in);
  LoopMargins m;
  std::vector<cd> l(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) l[i] = siso(loop, grid[i]);

  auto log_mag = [&](double w) { return std::log(std::abs(siso(loop, w))); };
  auto imag_part = [&](double w) { return siso(loop, w).imag(); };

  double best_pm = kInfinity, best_gm = kInfinity;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = std::log(std::abs(l[i])), b = std::log(std::abs(l[i + 1]));
    if (std::isfinite(a) && std::isfinite(b) && (a < 0.0) != (b < 0.0)) {
      const double w = refine(log_mag, grid[i], grid[i + 1]);
      const double pm = wrap_deg(180.0 + std::arg(siso(loop, w)) * 180.0 / std::numbers::pi);
      m.has_gain_crossover = true;
      if (pm < best_pm) {
        best_pm = pm;
        m.gain_crossover = w;
      }
      const double dm = pm > 0.0 ? pm * std::numbers::pi / 180.0 / w : 0.0;
      m.delay_margin = std::min(m.delay_margin, dm);
    }
    const double ia = l[i].imag(), ib = l[i + 1].imag();
    if (ia != 0.0 && ib != 0.0 && (ia < 0.0) != (ib < 0.0)) {
      const double w = refine(imag_part, grid[i], grid[i + 1]);
      const cd lw = siso(loop, w);
      if (lw.real() < 0.0) {
        const double gm = -20.0 * std::log10(std::abs(lw));
        m.has_phase_crossover = true;
        if (std::abs(gm) < std::abs(best_gm)) {
          best_gm = gm;
          m.phase_crossover = w;
        }
      }
    }
  }
  m.phase_margin_deg = best_pm;
  m.gain_margin_db = best_gm;
  m.marginal = m.has_gain_crossover && std::abs(best_pm) < 1e-6;
  return m;
}

DiskMargin disk_margin(const sim::StateSpace& loop, std::span<const double> grid_in) {
  if (loop.num_inputs() != loop.num_outputs()) throw DimensionError("disk margin needs a square loop");
  const std::vector<double> grid = grid_or_default(loop, grid_in);
  DiskMargin d;
  const Eigen::VectorXcd cl = sim::unity_feedback(loop).poles();
  d.closed_loop_stable = cl.size() == 0 || cl.real().maxCoeff() < 0.0;
  if (!d.closed_loop_stable) return d;
  const auto [s_half, w_half] = peak(loop, grid, 0.5);
  const auto [s_peak, w_s] = peak(loop, grid, 0.0);
  (void)w_s;
  d.alpha = 1.0 / s_half;
  d.peak_frequency = w_half;
  d.modulus_margin = 1.0 / s_peak;
  const double h = d.alpha / 2.0;
  d.gain_low = h < 1.0 ? (1.0 - h) / (1.0 + h) : 0.0;
  d.gain_high = h < 1.0 ? (1.0 + h) / (1.0 - h) : kInfinity;
  d.gain_margin_db = 20.0 * std::log10(d.gain_high);
  d.phase_margin_deg = 2.0 * std::atan(h) * 180.0 / std::numbers::pi;
  return d;
}

Margins margins(const sim::StateSpace& loop, std::span<const double> grid) {
  return {classical_margins(loop, grid), disk_margin(loop, grid)};
}

}  // namespace spcm::metrics
