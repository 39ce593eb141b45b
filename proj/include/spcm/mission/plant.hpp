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
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spcm/actuators/reaction_wheel.hpp"
#include "spcm/sim/quaternion.hpp"
#include "spcm/structure/structure.hpp"

namespace spcm::mission {

/// Nonlinear flexible spacecraft for time-domain runs.
///
/// Large-angle hub attitude (quaternion) and body twist, small elastic
/// coordinates from the assembled second-order model, and four rotor spin
/// states. Hub equations are written for the generalized momentum
/// p = M_hh v + M_he q_e' with the wheel spin momentum added to the angular
/// part, so with no external wrench the inertial angular momentum is a
/// constant of the motion.
///
/// State layout: [q (w x y z) | v (6) | q_e | q_e' | Omega (4) | phi (4)].
class Plant {
public:
  Plant(structure::CoupledLinearModel model, const actuators::RWPyramid& wheels,
        const actuators::WheelFidelity& fidelity);

  std::size_t state_size() const noexcept { return 10 + 2 * ne_ + 8; }
  std::size_t elastic_size() const noexcept { return ne_; }
  std::size_t input_size() const noexcept { return static_cast<std::size_t>(forcing_.cols()); }
  const structure::CoupledLinearModel& model() const noexcept { return model_; }

  Eigen::VectorXd initial_state(const sim::Quaternion& q, const Eigen::Vector4d& wheel_speeds) const;

  /// RK4 over dt with `u` (model inputs) and rotor torques held. Imbalance
  /// wrenches are evaluated inside the step from the rotor states. The
  /// quaternion is renormalized afterwards.
  void step(Eigen::VectorXd& x, const Eigen::VectorXd& u, const Eigen::Vector4d& rotor_torque, double dt) const;

  Eigen::VectorXd derivative(const Eigen::VectorXd& x, const Eigen::VectorXd& a0,
                             const Eigen::Vector4d& rotor_torque) const;

  static sim::Quaternion attitude(const Eigen::VectorXd& x);
  static Eigen::Vector3d rate(const Eigen::VectorXd& x) { return x.segment<3>(7); }
  Eigen::Vector4d wheel_speeds(const Eigen::VectorXd& x) const { return x.segment<4>(static_cast<Eigen::Index>(10 + 2 * ne_)); }
  Eigen::Vector4d wheel_phases(const Eigen::VectorXd& x) const { return x.segment<4>(static_cast<Eigen::Index>(14 + 2 * ne_)); }
  void set_wheels(Eigen::VectorXd& x, std::size_t k, double speed, double phase) const;

  /// Total angular momentum in the inertial frame (zero linear momentum assumed).
  Eigen::Vector3d angular_momentum(const Eigen::VectorXd& x) const;

  /// Selected model outputs from the elastic and hub-velocity states (hub
  /// pose columns are dropped; feedthrough ignored).
  Eigen::MatrixXd output_rows(const std::vector<std::string>& names) const;
  Eigen::VectorXd outputs(const Eigen::MatrixXd& rows, const Eigen::VectorXd& x) const;

  /// Model input index of a named port; LabelError if absent.
  std::size_t input(const std::string& name) const;

private:
  structure::CoupledLinearModel model_;
  std::size_t ne_ = 0;
  actuators::RWPyramid wheels_;
  actuators::WheelFidelity fidelity_;
  Eigen::Matrix<double, 3, 4> spin_momentum_;  // J_k a_k
  std::array<std::size_t, 4> wheel_input_{};
  Eigen::MatrixXd forcing_;
  Eigen::MatrixXd mass_hh_, mass_he_;
  Eigen::MatrixXd minv_f_;      // M^-1 F
  Eigen::MatrixXd minv_hub_;    // M^-1 columns for the hub rows
  Eigen::MatrixXd minv_k_, minv_c_;  // M^-1 [0; K_ee], M^-1 [0; C_ee]
  Eigen::MatrixXd minv_fw_;     // M^-1 F on the 24 wheel wrench inputs
};

}  // namespace spcm::mission
