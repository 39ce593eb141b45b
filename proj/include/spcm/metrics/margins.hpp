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


#pragma once

#include <limits>
#include <span>
#include <vector>

#include "spcm/sim/state_space.hpp"

namespace spcm::metrics {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Classical SISO margins of an open loop L (negative feedback). Values that
/// do not exist are +infinity with the matching flag cleared.
struct LoopMargins {
  double gain_margin_db = kInfinity;
  double phase_crossover = 0.0;    // rad/s
  bool has_phase_crossover = false;
  double phase_margin_deg = kInfinity;
  double gain_crossover = 0.0;     // rad/s
  bool has_gain_crossover = false;
  double delay_margin = kInfinity; // s
  bool marginal = false;           // |PM| below 1e-6 deg: on the stability boundary
};

/// Symmetric (zero-skew) disk margin of a square loop, unstructured across
/// channels: alpha = 1 / max_w sigma_max(S - I/2), S = (I + L)^-1.
struct DiskMargin {
  double alpha = 0.0;
  double gain_low = 1.0;           // tolerated gain range [low, high]
  double gain_high = 1.0;
  double gain_margin_db = 0.0;     // 20 log10(high)
  double phase_margin_deg = 0.0;   // 2 atan(alpha / 2)
  double peak_frequency = 0.0;     // rad/s
  double modulus_margin = 0.0;     // 1 / max_w sigma_max(S)
  bool closed_loop_stable = false;
};

struct Margins {
  LoopMargins classical;
  DiskMargin disk;
};

/// Log grid covering the loop dynamics: three decades either side of the
/// pole magnitudes.
std::vector<double> default_margin_grid(const sim::StateSpace& loop, std::size_t points = 1500);

/// Classical margins; crossings found on the grid and refined by bisection.
/// Throws DimensionError unless the loop is 1x1.
LoopMargins classical_margins(const sim::StateSpace& loop, std::span<const double> grid = {});

/// Throws DimensionError unless the loop is square.
DiskMargin disk_margin(const sim::StateSpace& loop, std::span<const double> grid = {});

/// Both sets for a SISO loop.
Margins margins(const sim::StateSpace& loop, std::span<const double> grid = {});

}  // namespace spcm::metrics
