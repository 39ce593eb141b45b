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

#include "spcm/actuators/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "spcm/error.hpp"

namespace spcm::actuators {

void SADMModel::validate(const std::string& path, std::vector<std::string>& errors) const {
  if (!(step_rate >= 0.0)) errors.push_back(path + ".step_rate: must be non-negative");
  if (!(stiffness >= 0.0) || !(damping >= 0.0)) errors.push_back(path + ".shaft: stiffness and damping must be non-negative");
  for (std::size_t i = 0; i < harmonics.size(); ++i) {
    if (!(harmonics[i].amplitude >= 0.0))
      errors.push_back(fmt::format("{}.harmonics[{}].amplitude: must be non-negative", path, i));
    if (!(harmonics[i].order > 0.0))
      errors.push_back(fmt::format("{}.harmonics[{}].order: must be positive", path, i));
  }
}

double sadm_torque(double t, const SADMModel& sadm) {
  double tau = 0.0;
  for (const auto& h : sadm.harmonics)
    tau += h.amplitude * std::sin(2.0 * std::numbers::pi * h.order * sadm.step_rate * t + h.phase);
  return tau;
}

void SecondOrderSpec::validate(const std::string& path, std::vector<std::string>& errors) const {
  if (!(natural_frequency > 0.0)) errors.push_back(path + ".natural_frequency: must be positive");
  if (!(damping > 0.0)) errors.push_back(path + ".damping: must be positive");
  if (!(stroke > 0.0)) errors.push_back(path + ".stroke: must be positive");
}

SecondOrderActuator::SecondOrderActuator(SecondOrderSpec spec, int axes, double dt) : spec_(spec) {
  std::vector<std::string> errors;
  spec.validate("actuator", errors);
  if (!(dt > 0.0)) errors.push_back("actuator: step must be positive");
  if (!errors.empty()) throw ConfigError(errors);
  const double w = spec.natural_frequency;
  Eigen::Matrix3d aug = Eigen::Matrix3d::Zero();
  aug(0, 1) = 1.0;
  aug(1, 0) = -w * w;
  aug(1, 1) = -2.0 * spec.damping * w;
  aug(1, 2) = w * w;
  const Eigen::Matrix3d e = (aug * dt).exp();
  phi_ = e.topLeftCorner<2, 2>();
  gamma_ = e.block<2, 1>(0, 2);
  pos_ = Eigen::VectorXd::Zero(axes);
  vel_ = Eigen::VectorXd::Zero(axes);
}

void SecondOrderActuator::reset() {
  pos_.setZero();
  vel_.setZero();
}

SecondOrderStep SecondOrderActuator::step(const Eigen::VectorXd& cmd) {
  if (cmd.size() != pos_.size()) throw DimensionError("actuator command has the wrong size");
  SecondOrderStep r;
  for (Eigen::Index i = 0; i < pos_.size(); ++i) {
    double u = cmd(i);
    if (std::abs(u) > spec_.stroke) {
      u = std::clamp(u, -spec_.stroke, spec_.stroke);
      r.clipped = true;
    }
    const Eigen::Vector2d x = phi_ * Eigen::Vector2d(pos_(i), vel_(i)) + gamma_ * u;
    pos_(i) = x(0);
    vel_(i) = x(1);
    if (std::abs(pos_(i)) > spec_.stroke) {
      pos_(i) = std::clamp(pos_(i), -spec_.stroke, spec_.stroke);
      vel_(i) = 0.0;
      r.clipped = true;
    }
  }
  r.output = pos_;
  return r;
}

}  // namespace spcm::actuators
