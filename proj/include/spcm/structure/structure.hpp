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
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spcm/sim/state_space.hpp"

namespace spcm::structure {

using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix6c = Eigen::Matrix<std::complex<double>, 6, 6>;

// Wrench and twist ordering everywhere: [force/translation xyz, torque/rotation xyz].

/// 6x6 kinematic transfer from a reference point to a point at offset r
/// (same axes): twist_r = transfer(r) * twist_ref.
Matrix6 rigid_transfer(const Eigen::Vector3d& r);

/// blkdiag(R, R).
Matrix6 rotate6(const Eigen::Matrix3d& r);

struct RigidBody {
  double mass = 0.0;                               // kg
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();  // kg m^2 about the CoM
  Eigen::Vector3d com = Eigen::Vector3d::Zero();      // m, body frame

  /// Mass matrix about `point` (body axes).
  Matrix6 mass_matrix_at(const Eigen::Vector3d& point = Eigen::Vector3d::Zero()) const;

  /// Appends problems to `errors`, prefixed by `path`.
  void validate(const std::string& path, std::vector<std::string>& errors) const;
};

/// Clamped appendage seen from its attachment point: rigid mass matrix plus
/// cantilever modes with their participation (modal mass-normalized).
struct FlexibleAppendage {
  std::string name;
  Matrix6 rigid_mass = Matrix6::Zero();  // M_A,P at the attachment, appendage axes
  Eigen::VectorXd frequencies;           // rad/s
  Eigen::VectorXd damping;               // ratio
  Eigen::MatrixXd participation;         // 6 x modes, column i = L_i

  std::size_t num_modes() const noexcept { return static_cast<std::size_t>(frequencies.size()); }
  double mass() const noexcept { return rigid_mass(0, 0); }
  Matrix6 residual_mass() const;

  void validate(const std::string& path, std::vector<std::string>& errors) const;
};

/// Frequency-dependent effective mass of the appendage at its attachment:
/// D(jw) = M - sum_i (jw)^2 / ((jw)^2 + 2 z_i w_i jw + w_i^2) L_i L_i^T.
Matrix6c dynamic_mass(const FlexibleAppendage& appendage, double omega);

/// Rotary joint at the attachment driven by a solar array drive.
struct SadmJoint {
  Eigen::Vector3d axis = Eigen::Vector3d::UnitY();  // appendage axes, unit
  std::size_t drive = 0;                            // which of the two drive angles applies
  bool compliant = true;                            // adds a shaft coordinate
  double stiffness = 0.0;                           // N m/rad
  double damping = 0.0;                             // N m s/rad
};

struct AppendageMount {
  FlexibleAppendage appendage;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();              // attachment, hub frame
  Eigen::Matrix3d orientation = Eigen::Matrix3d::Identity();       // appendage -> hub at zero angle
  std::optional<SadmJoint> sadm;
};

struct Isolator6DoF {
  Matrix6 stiffness = Matrix6::Zero();  // N/m, N m/rad
  Matrix6 damping = Matrix6::Zero();
  Eigen::Vector3d node = Eigen::Vector3d::Zero();  // m, hub frame

  void validate(const std::string& path, std::vector<std::string>& errors) const;
};

/// Payload reference point is the isolator node; payload axes = hub axes.
struct PayloadMount {
  FlexibleAppendage body;
  Isolator6DoF isolator;
};

/// First lateral slosh mode as a spring-mass in the plane normal to `axis`.
struct SloshModel {
  double mass = 0.0;        // kg
  double frequency = 0.0;   // rad/s
  double damping = 0.0;     // ratio
  double fluid_mass = 0.0;  // kg, total tank fluid (the fixed part belongs to the hub)
  Eigen::Vector3d node = Eigen::Vector3d::Zero();
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();

  void validate(const std::string& path, std::vector<std::string>& errors) const;
};

/// Wheel assembly (housing + rotor) at its mount; wheel z axis = spin axis.
/// The rotor spin DoF is not a structural coordinate.
struct WheelMount {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Matrix3d orientation = Eigen::Matrix3d::Identity();  // wheel -> hub
  double mass = 0.0;
  Eigen::Vector3d inertia = Eigen::Vector3d::Zero();  // transverse, transverse, axial (housing)
  double rotor_inertia = 0.0;                         // about the spin axis, for gyroscopic terms
  std::optional<Matrix6> isolator_stiffness;          // wheel axes; absent = hard mount
  std::optional<Matrix6> isolator_damping;

  void validate(const std::string& path, std::vector<std::string>& errors) const;
};

struct SpacecraftStructure {
  RigidBody hub;
  std::vector<AppendageMount> appendages;
  std::optional<PayloadMount> payload;
  std::optional<SloshModel> slosh;
  std::vector<WheelMount> wheels;
};

/// Orthonormal wheel frame whose z axis is `spin_axis`.
Eigen::Matrix3d frame_from_axis(const Eigen::Vector3d& spin_axis);

struct AssemblyOptions {
  /// Wheel speeds (rad/s) for gyroscopic coupling of isolated wheels; empty
  /// or `gyroscopic == false` leaves the model speed independent.
  std::vector<double> wheel_speeds;
  bool gyroscopic = false;
};

/// Coordinate bookkeeping of the second-order model.
struct CoordinateLayout {
  std::size_t hub = 0;  // always 0, 6 coordinates
  std::vector<std::optional<std::size_t>> sadm;      // per appendage
  std::vector<std::size_t> appendage_modes;          // per appendage, first modal coordinate
  std::optional<std::size_t> payload_isolator;       // 6 relative coordinates
  std::optional<std::size_t> payload_modes;
  std::optional<std::size_t> slosh;                  // 2 coordinates
  std::vector<std::optional<std::size_t>> wheel_isolator;  // per wheel, 6 coordinates
  std::size_t size = 6;
};

/// Assembled flexible spacecraft at frozen drive angles.
///
/// Coordinates: hub pose at the body origin (6) followed by relative elastic
/// coordinates, so stiffness and damping never touch the hub block. Hub
/// acceleration outputs are `hub_acc_*` (linear) and `hub_alpha_*`.
struct CoupledLinearModel {
  sim::StateSpace model;  // x = [q; q']
  std::array<double, 2> theta{0.0, 0.0};

  Eigen::MatrixXd mass;       // second-order form M q'' + C q' + K q = F u
  Eigen::MatrixXd damping;
  Eigen::MatrixXd stiffness;
  Eigen::MatrixXd forcing;    // n_q x n_inputs, columns match model inputs
  std::vector<std::string> coordinate_names;
  CoordinateLayout layout;

  double total_mass = 0.0;
  Eigen::VectorXcd elastic_poles;  // flexible poles (rigid-body zeros excluded)

  /// Composite rigid mass matrix about the body origin.
  Matrix6 rigid_mass() const { return mass.topLeftCorner<6, 6>(); }
  Eigen::Matrix3d composite_inertia() const { return mass.block<3, 3>(3, 3); }

  /// |lambda| of flexible poles with positive imaginary part, ascending.
  std::vector<double> flexible_frequencies() const;
  double max_frequency() const;

  /// All poles of the first-order model: 12 rigid zeros plus the elastic set.
  Eigen::VectorXcd poles() const;
};

/// Throws ConfigError listing every invalid body, or naming the body whose
/// mass block is indefinite; throws ConfigError if any pole has real part
/// above 1e-9.
CoupledLinearModel assemble(const SpacecraftStructure& sc, std::array<double, 2> theta,
                            const AssemblyOptions& options = {});

/// Same structure, new drive angles (each in [0, 2pi)).
CoupledLinearModel set_sadm_angle(const SpacecraftStructure& sc, std::array<double, 2> theta);

/// Wheel disturbance wrench (wheel axes, 6 inputs) to hub angular
/// acceleration (3 outputs). Throws LabelError for an unknown wheel.
sim::StateSpace wheel_mount_transfer(const CoupledLinearModel& model, std::size_t wheel_index);

/// Port name helpers.
std::vector<std::string> wheel_input_names(std::size_t wheel_index);
std::vector<std::string> wheel_mount_output_names(std::size_t wheel_index);
std::vector<std::string> hub_alpha_names();

}  // namespace spcm::structure
