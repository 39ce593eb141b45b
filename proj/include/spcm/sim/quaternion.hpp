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
#include <Eigen/Geometry>

// Attitude convention used throughout: q rotates body-frame vectors into the
// reference (inertial) frame, v_I = q * v_B, and body rates obey
// q' = 0.5 * q (x) [0, omega_B].

namespace spcm::sim {

using Quaternion = Eigen::Quaterniond;

/// Unit quaternion from a rotation vector (axis * angle, rad).
Quaternion quat_exp(const Eigen::Vector3d& rotation_vector);

/// Rotation vector of a unit quaternion, angle in [0, pi].
Eigen::Vector3d quat_log(const Quaternion& q);

/// Exact update for a body rate held constant over dt; result renormalized.
Quaternion quat_propagate(const Quaternion& q, const Eigen::Vector3d& omega_body, double dt);

/// q' for body rates, as (w, x, y, z).
Eigen::Vector4d quat_derivative(const Quaternion& q, const Eigen::Vector3d& omega_body);

/// Rotation vector taking the reference attitude onto the actual one,
/// expressed in the reference body frame: log(q_ref^-1 q).
Eigen::Vector3d attitude_error(const Quaternion& q, const Quaternion& q_ref);

Eigen::Matrix3d skew(const Eigen::Vector3d& v);

}  // namespace spcm::sim
