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
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spcm/actuators/mechanisms.hpp"
#include "spcm/actuators/reaction_wheel.hpp"
#include "spcm/actuators/thrusters.hpp"
#include "spcm/disturbances/disturbances.hpp"
#include "spcm/metrics/uncertainty.hpp"
#include "spcm/mission/control.hpp"
#include "spcm/mission/timeline.hpp"
#include "spcm/optics/optics.hpp"
#include "spcm/sensors/sensors.hpp"
#include "spcm/sim/quaternion.hpp"
#include "spcm/structure/structure.hpp"

namespace spcm::mission {

/// Four wheels in a pyramid; one prototype wheel, housings on optional isolators.
struct WheelAssemblyConfig {
  actuators::ReactionWheel wheel;
  double cant = 0.7853981633974483;                    // rad, spin axis elevation
  std::array<double, 4> azimuth{0.7853981633974483, 2.356194490192345, 3.9269908169872414, 5.497787143782138};
  double radius = 0.85;                                // m, radial mount distance
  double height = -0.8;                                // m, mount z
  double housing_mass = 6.0;                           // kg
  Eigen::Vector3d housing_inertia = Eigen::Vector3d(0.05, 0.05, 0.02);
  std::optional<structure::Matrix6> isolator_stiffness;
  std::optional<structure::Matrix6> isolator_damping;
  double bias_speed = 0.0;                             // rad/s per wheel along the null vector
  double null_gain = 0.05;                             // 1/s, momentum bias loop

  actuators::RWPyramid pyramid() const;
  void validate(std::vector<std::string>& errors) const;
};

struct RcsConfig {
  actuators::Thruster prototype;
  double half_size = 1.0;  // m
  double lever = 0.8;      // m

  std::vector<actuators::Thruster> layout() const;
  void validate(std::vector<std::string>& errors) const;
};

struct SensorSuiteConfig {
  sensors::StarTrackerSpec str;
  sensors::GyroSpec gyro_coarse;
  sensors::GyroSpec gyro_fine;
  sensors::FgsSpec fgs;
  double str_blend = 0.1;  // complementary filter weight per star tracker sample
};

struct OpticsConfig {
  optics::TelescopeGeometry geometry;
  std::vector<std::pair<std::string, double>> misalignment;  // static element offsets by label
};

struct SpacecraftConfig {
  structure::RigidBody hub;
  std::vector<structure::AppendageMount> appendages;
  std::optional<structure::PayloadMount> payload;
  std::optional<structure::SloshModel> slosh;
  std::array<double, 2> theta{0.0, 0.0};  // SADM angles, rad
  WheelAssemblyConfig wheels;
  RcsConfig rcs;
  actuators::SADMModel sadm;
  actuators::SecondOrderSpec fsm;
  actuators::SecondOrderSpec pma;
  SensorSuiteConfig sensors;
  OpticsConfig optics;
};

struct DisturbanceConfig {
  disturbances::Orbit orbit;
  bool gravity_gradient = true;
  disturbances::SolarPressure solar;
};

/// Per-effect switches.
struct Fidelity {
  bool imbalances = true;
  bool friction = true;
  bool spikes = true;
  bool microstepping = true;
  bool pwm = true;
  bool sloshing = true;
  bool wheel_noise = true;
  bool sensor_noise = true;
};

/// Sensors and actuators in use during one control window.
struct PhaseSuite {
  bool str = true;
  bool gyro_coarse = false;
  bool gyro_fine = false;
  bool fgs = false;
  bool rcs = false;
  bool rws = false;
  bool fsm = false;
  bool pma = false;
  AttitudeGains gains;

  void validate(const std::string& path, std::vector<std::string>& errors) const;
};

struct ControlSuite {
  std::array<PhaseSuite, 3> window;    // slew, coarse, fine
  double rate = 50.0;                  // attitude controller, Hz
  double los_integral_gain = 3.0;      // 1/s, FSM loop
  double pma_gain = 0.0;               // N s/m, proof-mass velocity feedback on the payload isolator
  double jump_bound = 0.05;            // N m, allowed command step at a controller switch
};

struct SlewConfig {
  sim::Quaternion initial = sim::Quaternion::Identity();
  sim::Quaternion target = sim::Quaternion::Identity();
  double omega_max = 0.0087;   // rad/s
  double alpha_max = 2e-4;     // rad/s^2
};

struct SolverConfig {
  double dt = 0.002;           // base step, s
  double log_rate = 50.0;      // time-series and metric sampling, Hz
};

struct Scenario {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  SolverConfig solver;
  SpacecraftConfig spacecraft;
  DisturbanceConfig disturbances;
  Fidelity fidelity;
  ModeTimeline timeline;
  ControlSuite control;
  SlewConfig slew;
  std::vector<metrics::UncertainParameter> uncertain;

  /// Every problem found (dimensions, rates, step size, thresholds, suites).
  std::vector<std::string> validation_errors() const;
  /// Throws ConfigError with the full list.
  void validate() const;
};

/// Structure for assembly; slosh only when the fidelity flag is on.
structure::SpacecraftStructure build_structure(const Scenario& s);

actuators::WheelFidelity wheel_fidelity(const Fidelity& f);

/// Names accepted by apply_parameter. `<name>` is an appendage name, or a
/// prefix ending in '*'.
///   appendage.<name>.frequency_scale   appendage.<name>.damping_scale
///   payload.isolator.stiffness_scale   payload.isolator.damping_scale
///   wheels.isolator.stiffness_scale    wheels.isolator.damping_scale
///   wheels.static_imbalance            wheels.dynamic_imbalance
///   wheels.bias_speed                  hub.mass_scale    hub.inertia_scale
///   slosh.frequency_scale              sadm.amplitude_scale
///   sensors.str.noise_scale            sensors.fgs.noise_scale
/// Scales multiply the value loaded from the scenario. Throws LabelError for
/// an unknown path.
void apply_parameter(Scenario& s, const std::string& path, double value);
bool is_parameter_path(const Scenario& s, const std::string& path);

}  // namespace spcm::mission
