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

#include <Eigen/Dense>

#include "spcm/sim/quaternion.hpp"

namespace spcm::mission {

struct ReferenceState {
  sim::Quaternion q = sim::Quaternion::Identity();
  Eigen::Vector3d omega = Eigen::Vector3d::Zero();  // body axes of the reference, rad/s
  Eigen::Vector3d alpha = Eigen::Vector3d::Zero();  // rad/s^2
};

/// Rest-to-rest eigenaxis slew with a bang-coast-bang angle profile.
class SlewProfile {
public:
  SlewProfile() = default;
  /// Throws ConfigError for non-positive limits.
  SlewProfile(const sim::Quaternion& q0, const sim::Quaternion& q_target, double omega_max, double alpha_max);

  double duration() const noexcept { return duration_; }
  double angle() const noexcept { return angle_; }
  const Eigen::Vector3d& axis() const noexcept { return axis_; }
  bool has_coast() const noexcept { return coast_ > 0.0; }

  /// Reference at time t since the slew start; holds the target after the end.
  ReferenceState sample(double t) const;

private:
  sim::Quaternion q0_ = sim::Quaternion::Identity();
  sim::Quaternion target_ = sim::Quaternion::Identity();
  Eigen::Vector3d axis_ = Eigen::Vector3d::UnitZ();
  double angle_ = 0.0;
  double alpha_ = 0.0;
  double accel_time_ = 0.0;
  double coast_ = 0.0;
  double duration_ = 0.0;
};

SlewProfile slew_guidance(const sim::Quaternion& q0, const sim::Quaternion& q_target, double omega_max,
                          double alpha_max);

}  // namespace spcm::mission
