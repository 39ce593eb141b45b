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

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spcm::actuators {

struct SadmHarmonic {
  double order = 1.0;
  double amplitude = 0.0;  // N m
  double phase = 0.0;      // rad
};

struct SADMModel {
  double step_rate = 0.0;  // f_step, Hz
  std::vector<SadmHarmonic> harmonics;
  double rotation_rate = 0.0;  // rad/s, mean array tracking rate
  double stiffness = 0.0;      // output shaft, N m/rad
  double damping = 0.0;        // N m s/rad

  void validate(const std::string& path, std::vector<std::string>& errors) const;
};

/// Microstepping disturbance at the output shaft: sum a_k sin(2 pi k f t + phi_k).
double sadm_torque(double t, const SADMModel& sadm);

struct SecondOrderSpec {
  double natural_frequency = 0.0;  // rad/s
  double damping = 0.7;
  double stroke = 0.0;             // output limit (rad for the FSM, N for a PMA)

  void validate(const std::string& path, std::vector<std::string>& errors) const;
};

struct SecondOrderStep {
  Eigen::VectorXd output;
  bool clipped = false;
};

/// Per-axis y'' + 2 z w y' + w^2 y = w^2 u, discretized exactly for a
/// command held over dt. Command and output are clipped to the stroke.
class SecondOrderActuator {
public:
  SecondOrderActuator() = default;
  SecondOrderActuator(SecondOrderSpec spec, int axes, double dt);

  SecondOrderStep step(const Eigen::VectorXd& cmd);
  const Eigen::VectorXd& output() const noexcept { return pos_; }
  const Eigen::VectorXd& rate() const noexcept { return vel_; }
  void reset();

private:
  SecondOrderSpec spec_;
  Eigen::Matrix2d phi_ = Eigen::Matrix2d::Identity();
  Eigen::Vector2d gamma_ = Eigen::Vector2d::Zero();
  Eigen::VectorXd pos_, vel_;
};

/// Fast steering mirror: two tilt axes (tip, tilt), rad.
using FastSteeringMirror = SecondOrderActuator;
/// Proof-mass actuators: three force axes at the payload, N.
using ProofMassActuators = SecondOrderActuator;

}  // namespace spcm::actuators
