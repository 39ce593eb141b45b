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


#include "spcm/mission/control.hpp"

#include <cmath>

#include <fmt/format.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "spcm/error.hpp"

namespace spcm::mission {

void AttitudeGains::validate(const std::string& path, std::vector<std::string>& errors) const {
  if (!(bandwidth > 0.0)) errors.push_back(path + ".bandwidth: must be positive");
  if (!(damping > 0.0)) errors.push_back(path + ".damping: must be positive");
  if (!(rolloff_frequency >= 0.0)) errors.push_back(path + ".rolloff_frequency: must be non-negative");
  if (rolloff_frequency > 0.0 && !(rolloff_damping > 0.0))
    errors.push_back(path + ".rolloff_damping: must be positive");
  if (!(torque_limit >= 0.0)) errors.push_back(path + ".torque_limit: must be non-negative");
}

std::complex<double> rolloff_response(const AttitudeGains& g, double omega) {
  if (g.rolloff_frequency == 0.0) return 1.0;
  const double wf = g.rolloff_frequency;
  return wf * wf / std::complex<double>(wf * wf - omega * omega, 2.0 * g.rolloff_damping * wf * omega);
}

AttitudeController::AttitudeController(const AttitudeGains& gains, const Eigen::Matrix3d& inertia, double dt)
    : gains_(gains), inertia_(inertia) {
  std::vector<std::string> errors;
  gains.validate("controller", errors);
  if (!(dt > 0.0)) errors.push_back("controller: period must be positive");
  if (!errors.empty()) throw ConfigError(errors);
  if (gains.rolloff_frequency > 0.0) {
    const double w = gains.rolloff_frequency, z = gains.rolloff_damping;
    Eigen::Matrix3d aug = Eigen::Matrix3d::Zero();
    aug << 0.0, 1.0, 0.0, -w * w, -2.0 * z * w, w * w, 0.0, 0.0, 0.0;
    const Eigen::Matrix3d e = (aug * dt).exp();
    phi_ = e.topLeftCorner<2, 2>();
    gamma_ = e.topRightCorner<2, 1>();
  }
}

Eigen::Vector3d AttitudeController::update(const Eigen::Vector3d& error, const Eigen::Vector3d& rate_error,
                                           const Eigen::Vector3d& alpha_ref, bool sensors_valid) {
  if (!sensors_valid) return command_;
  const double w = gains_.bandwidth, z = gains_.damping;
  const Eigen::Vector3d u = inertia_ * (-w * w * error - 2.0 * z * w * rate_error + alpha_ref);
  Eigen::Vector3d y;
  if (gains_.rolloff_frequency > 0.0) {
    for (int a = 0; a < 3; ++a) {
      x_.col(a) = phi_ * x_.col(a) + gamma_ * u(a);
      y(a) = x_(0, a);
    }
  } else {
    y = u;
  }
  if (gains_.torque_limit > 0.0) y = y.cwiseMax(-gains_.torque_limit).cwiseMin(gains_.torque_limit);
  command_ = y;
  return command_;
}

void AttitudeController::initialize(const Eigen::Vector3d& command) {
  x_.row(0) = command.transpose();
  x_.row(1).setZero();
  command_ = command;
}

FineLosController::FineLosController(double integral_gain, double stroke, const Eigen::Matrix2d& optical_gain,
                                     double dt)
    : gain_(integral_gain), stroke_(stroke), dt_(dt) {
  if (!(integral_gain > 0.0) || !(stroke > 0.0) || !(dt > 0.0))
    throw ConfigError("fine LOS loop: gain, stroke and period must be positive");
  if (std::abs(optical_gain.determinant()) < 1e-12)
    throw ConfigError("fine LOS loop: FSM optical gain is singular");
  inverse_gain_ = optical_gain.inverse();
}

FineLosController::Output FineLosController::update(const Eigen::Vector2d& los, bool fgs_valid) {
  Output out;
  if (!fgs_valid) {
    out.tilt = tilt_;
    out.held = true;
    return out;
  }
  const Eigen::Vector2d next = tilt_ - gain_ * dt_ * (inverse_gain_ * los);
  for (int a = 0; a < 2; ++a) {
    if (std::abs(next(a)) > stroke_) {
      out.saturated = true;  // integrator held on this axis
    } else {
      tilt_(a) = next(a);
    }
  }
  out.tilt = tilt_;
  return out;
}

}  // namespace spcm::mission
