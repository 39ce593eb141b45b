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

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "spcm/actuators/reaction_wheel.hpp"
#include "spcm/structure/structure.hpp"

namespace spcm::metrics {

struct WaterfallOptions {
  std::vector<double> speeds_hz;    // wheel speed grid
  double f_max = 200.0;             // Hz
  double resolution = 0.25;         // Hz, frequency bin width
  std::size_t wheel = 0;            // which wheel carries the imbalance
  int component = 3;                // mount wrench component, 0..5 = fx fy fz tx ty tz (wheel axes)
  bool gyroscopic = false;          // reassemble per speed with rotor momentum on the isolator
};

/// Speed x frequency maps. Lines sit in the bin nearest h * Omega / 2 pi.
struct WaterfallMap {
  std::vector<double> speeds_hz;
  std::vector<double> freqs_hz;
  Eigen::MatrixXd source;       // imbalance line amplitudes produced by the rotor, N or N m
  Eigen::MatrixXd transmitted;  // line amplitudes of the mount wrench through the isolator/structure
  Eigen::MatrixXd floor;        // broadband noise through the mount path, amplitude density per sqrt(Hz)
};

/// Complex amplitude of one imbalance line on the six wheel-frame wrench
/// components, w(t) = Re(P exp(j h Omega t)).
struct LinePhasor {
  double order = 1.0;
  Eigen::Matrix<std::complex<double>, 6, 1> phasor;
};
std::vector<LinePhasor> imbalance_lines(const actuators::ReactionWheel& w, double speed);

/// Steady-state mount wrench phasor of one line through the assembled model.
Eigen::Matrix<std::complex<double>, 6, 1> transmitted_line(const structure::CoupledLinearModel& model, std::size_t wheel,
                                                           const LinePhasor& line, double speed);

WaterfallMap waterfall(const structure::SpacecraftStructure& sc, std::array<double, 2> theta,
                       const actuators::ReactionWheel& wheel, const WaterfallOptions& options);

}  // namespace spcm::metrics
