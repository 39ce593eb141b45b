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

#include "spcm/sim/quaternion.hpp"

#include <cmath>

namespace spcm::sim {

Quaternion quat_exp(const Eigen::Vector3d& rotation_vector) {
  const double angle = rotation_vector.norm();
  const double half = 0.5 * angle;
  // sin(x)/x series below 1e-4 keeps full precision near zero.
  const double k = half < 1e-4 ? 0.5 * (1.0 - half * half / 6.0) : std::sin(half) / angle;
  Quaternion q(std::cos(half), k * rotation_vector.x(), k * rotation_vector.y(),
               k * rotation_vector.z());
  q.normalize();
  return q;
}

Eigen::Vector3d quat_log(const Quaternion& q_in) {
  Quaternion q = q_in.normalized();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  const double s = q.vec().norm();
  if (s < 1e-12) return 2.0 * q.vec();
  const double angle = 2.0 * std::atan2(s, q.w());
  return q.vec() * (angle / s);
}

Quaternion quat_propagate(const Quaternion& q, const Eigen::Vector3d& omega_body, double dt) {
  Quaternion out = q * quat_exp(omega_body * dt);
  out.normalize();
  return out;
}

Eigen::Vector4d quat_derivative(const Quaternion& q, const Eigen::Vector3d& omega_body) {
  const Quaternion w(0.0, omega_body.x(), omega_body.y(), omega_body.z());
  const Quaternion d = q * w;
  return 0.5 * Eigen::Vector4d(d.w(), d.x(), d.y(), d.z());
}

Eigen::Vector3d attitude_error(const Quaternion& q, const Quaternion& q_ref) {
  return quat_log(q_ref.conjugate() * q);
}

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

}  // namespace spcm::sim
