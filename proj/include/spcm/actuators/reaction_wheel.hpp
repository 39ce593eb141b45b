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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spcm/sim/random.hpp"

namespace spcm::actuators {

using Vector6 = Eigen::Matrix<double, 6, 1>;

struct StribeckFriction {
  double coulomb = 0.0;        // tau_c, N m
  double stiction = 0.0;       // tau_s, N m
  double stribeck_rate = 1.0;  // omega_s, rad/s
  double viscous = 0.0;        // c_v, N m s/rad
};

/// Friction torque on the rotor at speed `omega` (omega != 0).
double stribeck_torque(const StribeckFriction& f, double omega);

/// Extra imbalance line at `order` times the spin frequency. Amplitudes
/// scale with Omega^2: force = force_coeff Omega^2, torque = torque_coeff Omega^2.
struct HarmonicLine {
  double order = 1.0;
  double force_coeff = 0.0;   // kg m
  double torque_coeff = 0.0;  // kg m^2
  double phase = 0.0;         // rad
};

struct SpikeModel {
  double rate_per_hour = 0.0;
  double amplitude_min = 0.0;  // N m
  double amplitude_max = 0.0;
};

struct ReactionWheel {
  Eigen::Vector3d spin_axis = Eigen::Vector3d::UnitZ();  // hub frame
  double rotor_inertia = 0.0;     // J_w, kg m^2
  double max_torque = 0.0;        // N m
  double max_momentum = 0.0;      // N m s
  double static_imbalance = 0.0;  // U_s, kg m
  double dynamic_imbalance = 0.0; // U_d, kg m^2
  double dynamic_phase = 0.0;     // rad, torque line phase relative to the force line
  std::vector<HarmonicLine> harmonics;  // orders other than the fundamental
  StribeckFriction friction;
  double stick_band = 0.0;        // omega_dead, rad/s
  SpikeModel spikes;
  double noise_psd = 0.0;         // one-sided, (N m)^2/Hz, on each transverse torque axis

  void validate(const std::string& path, std::vector<std::string>& errors) const;
};

struct WheelFidelity {
  bool saturation = true;
  bool friction = true;
  bool imbalance = true;
  bool harmonics = true;
  bool spikes = true;
  bool noise = true;
};

struct WheelState {
  double speed = 0.0;  // rad/s
  double phase = 0.0;  // rad, integral of speed
  bool stuck = false;
};

struct WheelStepResult {
  double speed = 0.0;             // after the step
  double delivered_torque = 0.0;  // net torque on the rotor over the step, N m
  Vector6 wrench = Vector6::Zero();  // disturbance wrench on the mount, wheel frame, at step start
  bool torque_clipped = false;
  bool momentum_saturated = false;
  bool spike = false;
  double spike_torque = 0.0;
  Eigen::Vector2d noise = Eigen::Vector2d::Zero();  // transverse torque noise held over the step
};

/// Imbalance wrench (wheel frame, spin axis z) at speed and rotor phase.
Vector6 imbalance_wrench(const ReactionWheel& w, double speed, double phase, const WheelFidelity& flags);

/// One actuator tick. `torque_cmd` acts on the rotor (the hub receives the
/// reaction). Speed and phase advance with the delivered torque held over dt.
WheelStepResult rw_step(const ReactionWheel& w, WheelState& state, double torque_cmd, double dt,
                        const WheelFidelity& flags, sim::Rng& rng);

struct RWPyramid {
  std::array<ReactionWheel, 4> wheels;
  double cant = 0.0;                        // elevation of spin axes from the xy plane, rad
  std::array<double, 4> azimuth{};          // rad

  /// Builds spin axes from cant and azimuths into every wheel.
  static RWPyramid make(const ReactionWheel& prototype, double cant, std::array<double, 4> azimuth);

  Eigen::Matrix<double, 3, 4> allocation_matrix() const;
  /// Unit null-space vector of the allocation matrix.
  Eigen::Vector4d null_vector() const;
  /// ConfigError on rank-deficient geometry.
  void validate(const std::string& path, std::vector<std::string>& errors) const;
};

/// Minimum-norm wheel torques with A * result = torque.
Eigen::Vector4d rw_allocate(const Eigen::Vector3d& torque, const RWPyramid& pyramid);

}  // namespace spcm::actuators
