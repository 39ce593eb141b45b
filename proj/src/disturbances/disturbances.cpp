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


#include "spcm/disturbances/disturbances.hpp"

#include <cmath>

namespace spcm::disturbances {

void Orbit::validate(std::vector<std::string>& errors) const {
  if (!(rate > 0.0) || !std::isfinite(rate)) errors.push_back("orbit.rate: must be positive");
  if (!std::isfinite(phase)) errors.push_back("orbit.phase: must be finite");
}

Eigen::Vector3d nadir_direction(const Orbit& orbit, double t) {
  const double a = orbit.rate * t + orbit.phase;
  return Eigen::Vector3d(std::sin(a), 0.0, std::cos(a));
}

Eigen::Vector3d gravity_gradient(const sim::Quaternion& q, const Eigen::Matrix3d& inertia, double orbit_rate,
                                 const Eigen::Vector3d& nadir_reference) {
  const Eigen::Vector3d u = (q.conjugate() * nadir_reference).normalized();
  return 3.0 * orbit_rate * orbit_rate * u.cross(inertia * u);
}

void SolarPressure::validate(std::vector<std::string>& errors) const {
  if (!bias.allFinite()) errors.push_back("solar_pressure.bias: must be finite");
  if (!amplitude.allFinite()) errors.push_back("solar_pressure.amplitude: must be finite");
  if (!std::isfinite(phase)) errors.push_back("solar_pressure.phase: must be finite");
}

Vector6 solar_pressure(double t, const Orbit& orbit, const SolarPressure& config) {
  return config.bias + config.amplitude * std::sin(orbit.rate * t + config.phase);
}

}  // namespace spcm::disturbances
