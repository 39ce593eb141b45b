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

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spcm::mission {

/// Quaternion-error PD with rate feedback, followed by a second-order
/// low-pass roll-off on the torque command. A zero roll-off frequency
/// disables the filter.
struct AttitudeGains {
  double bandwidth = 0.1;          // omega_c, rad/s
  double damping = 0.8;            // zeta
  double rolloff_frequency = 1.2;  // rad/s
  double rolloff_damping = 0.7;
  double torque_limit = 0.0;       // N m per axis, 0 = none

  void validate(const std::string& path, std::vector<std::string>& errors) const;
};

/// Continuous roll-off filter response at omega.
std::complex<double> rolloff_response(const AttitudeGains& g, double omega);

class AttitudeController {
public:
  AttitudeController() = default;
  AttitudeController(const AttitudeGains& gains, const Eigen::Matrix3d& inertia, double dt);

  /// `error` is the rotation vector from the reference to the estimate,
  /// `rate_error` the body rate minus the reference rate. Invalid sensors hold
  /// the previous command.
  Eigen::Vector3d update(const Eigen::Vector3d& error, const Eigen::Vector3d& rate_error,
                         const Eigen::Vector3d& alpha_ref, bool sensors_valid);

  /// Bumpless start: the filter is put at rest on `command`.
  void initialize(const Eigen::Vector3d& command);
  const Eigen::Vector3d& command() const noexcept { return command_; }
  const AttitudeGains& gains() const noexcept { return gains_; }

private:
  AttitudeGains gains_;
  Eigen::Matrix3d inertia_ = Eigen::Matrix3d::Identity();
  Eigen::Matrix2d phi_ = Eigen::Matrix2d::Identity();
  Eigen::Vector2d gamma_ = Eigen::Vector2d::Zero();
  Eigen::Matrix<double, 2, 3> x_ = Eigen::Matrix<double, 2, 3>::Zero();  // filter state per axis
  Eigen::Vector3d command_ = Eigen::Vector3d::Zero();
};

/// Integral LOS loop on the FSM through its optical gain (LOS per tilt).
class FineLosController {
public:
  FineLosController() = default;
  FineLosController(double integral_gain, double stroke, const Eigen::Matrix2d& optical_gain, double dt);

  struct Output {
    Eigen::Vector2d tilt = Eigen::Vector2d::Zero();
    bool held = false;       // FGS invalid: command frozen
    bool saturated = false;  // anti-windup engaged on some axis
  };
  Output update(const Eigen::Vector2d& los_measured, bool fgs_valid);
  void reset(const Eigen::Vector2d& tilt = Eigen::Vector2d::Zero()) { tilt_ = tilt; }
  const Eigen::Vector2d& tilt() const noexcept { return tilt_; }

private:
  double gain_ = 0.0;
  double stroke_ = 0.0;
  double dt_ = 0.0;
  Eigen::Matrix2d inverse_gain_ = Eigen::Matrix2d::Identity();
  Eigen::Vector2d tilt_ = Eigen::Vector2d::Zero();
};

}  // namespace spcm::mission
