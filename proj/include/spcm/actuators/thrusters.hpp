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

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spcm/error.hpp"

namespace spcm::actuators {

struct Thruster {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // m, hub frame
  Eigen::Vector3d direction = Eigen::Vector3d::UnitX(); // unit, force direction
  double thrust = 0.0;      // F, N
  double mib = 0.0;         // N s
  double pwm_period = 0.1;  // T_pwm, s
  double delay_on = 0.0;    // s
  double delay_off = 0.0;   // s
  double quantum = 1e-3;    // on-time resolution, s

  /// Unit-force wrench about the body origin.
  Eigen::Matrix<double, 6, 1> unit_wrench() const;
  void validate(const std::string& path, std::vector<std::string>& errors) const;
};

/// One PWM cycle. Times are relative to the cycle start; thrust is on in
/// [start, end). end may spill past the cycle when delay_off > delay_on.
struct Pulse {
  double on_time = 0.0;  // commanded valve-open time
  double start = 0.0;
  double end = 0.0;
  bool below_mib = false;
  bool saturated = false;

  double width() const noexcept { return end - start; }
};

Pulse pwm_modulate(double impulse_cmd, const Thruster& t);

/// Twelve thrusters on the faces of a box of half-extents (a, a, a) with
/// lever arm b, four per axis, positively spanning every wrench direction.
std::vector<Thruster> parallelepiped_layout(double half_size, double lever, const Thruster& prototype);

class InfeasibleWrench : public Error {
public:
  InfeasibleWrench(const std::string& what, Eigen::Matrix<double, 6, 1> achievable)
      : Error(what), achievable_(achievable) {}
  const Eigen::Matrix<double, 6, 1>& achievable() const noexcept { return achievable_; }

private:
  Eigen::Matrix<double, 6, 1> achievable_;
};

/// Non-negative per-thruster impulses for one PWM cycle whose mean wrench is
/// `wrench` (N, N m). Throws InfeasibleWrench with the closest achievable
/// wrench when the residual exceeds 1e-9 relative.
Eigen::VectorXd rcs_allocate(const Eigen::Matrix<double, 6, 1>& wrench, std::span<const Thruster> thrusters);

}  // namespace spcm::actuators
