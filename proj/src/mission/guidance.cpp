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


#include "spcm/mission/guidance.hpp"

#include <cmath>

#include "spcm/error.hpp"

namespace spcm::mission {

SlewProfile::SlewProfile(const sim::Quaternion& q0, const sim::Quaternion& q_target, double omega_max,
                         double alpha_max)
    : q0_(q0.normalized()), target_(q_target.normalized()), alpha_(alpha_max) {
  if (!(omega_max > 0.0) || !(alpha_max > 0.0) || !std::isfinite(omega_max) || !std::isfinite(alpha_max))
    throw ConfigError("slew limits must be positive");
  const Eigen::Vector3d r = sim::quat_log(q0_.conjugate() * target_);
  angle_ = r.norm();
  if (angle_ == 0.0) return;
  axis_ = r / angle_;
  if (angle_ >= omega_max * omega_max / alpha_max) {
    accel_time_ = omega_max / alpha_max;
    coast_ = angle_ / omega_max - accel_time_;
  } else {
    accel_time_ = std::sqrt(angle_ / alpha_max);
    coast_ = 0.0;
  }
  duration_ = 2.0 * accel_time_ + coast_;
}

ReferenceState SlewProfile::sample(double t) const {
  ReferenceState ref;
  if (angle_ == 0.0 || t >= duration_) {
    ref.q = target_;
    return ref;
  }
  t = std::max(t, 0.0);
  const double ta = accel_time_;
  const double wpk = alpha_ * ta;
  double s, rate, acc;
  if (t < ta) {
    s = 0.5 * alpha_ * t * t;
    rate = alpha_ * t;
    acc = alpha_;
  } else if (t < ta + coast_) {
    s = 0.5 * alpha_ * ta * ta + wpk * (t - ta);
    rate = wpk;
    acc = 0.0;
  } else {
    const double r = duration_ - t;
    s = angle_ - 0.5 * alpha_ * r * r;
    rate = alpha_ * r;
    acc = -alpha_;
  }
  ref.q = (q0_ * sim::quat_exp(s * axis_)).normalized();
  ref.omega = rate * axis_;
  ref.alpha = acc * axis_;
  return ref;
}

SlewProfile slew_guidance(const sim::Quaternion& q0, const sim::Quaternion& q_target, double omega_max,
                          double alpha_max) {
  return SlewProfile(q0, q_target, omega_max, alpha_max);
}

}  // namespace spcm::mission
