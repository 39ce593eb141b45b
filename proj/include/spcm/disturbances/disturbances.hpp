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

#include "spcm/sim/quaternion.hpp"

namespace spcm::disturbances {

using Vector6 = Eigen::Matrix<double, 6, 1>;

/// Circular orbit. The orbit normal is the reference-frame y axis; nadir
/// starts along +z at t = 0 and turns at the orbit rate.
struct Orbit {
  double rate = 1.1e-3;   // rad/s
  double phase = 0.0;     // rad at t = 0

  void validate(std::vector<std::string>& errors) const;
};

/// Nadir direction in the reference frame at time t.
Eigen::Vector3d nadir_direction(const Orbit& orbit, double t);

/// tau = 3 n^2 u x (I u), u = nadir in body axes.
Eigen::Vector3d gravity_gradient(const sim::Quaternion& q, const Eigen::Matrix3d& inertia,
                                 double orbit_rate, const Eigen::Vector3d& nadir_reference);

/// Body-frame force/torque: bias + amplitude * sin(n t + phase). Not taken from
/// any measured spacecraft; the defaults are order-of-magnitude values for a
/// few-tonne vehicle with two 12 m^2 wings.
struct SolarPressure {
  Vector6 bias = (Vector6() << 0.0, 0.0, 0.0, 2e-6, -1e-6, 0.0).finished();
  Vector6 amplitude = (Vector6() << 4e-5, 0.0, 4e-5, 3e-6, 0.0, 5e-6).finished();
  double phase = 0.0;

  void validate(std::vector<std::string>& errors) const;
};

Vector6 solar_pressure(double t, const Orbit& orbit, const SolarPressure& config);

}  // namespace spcm::disturbances
