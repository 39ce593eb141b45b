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

#include "spcm/actuators/thrusters.hpp"

#include <cmath>

#include <fmt/format.h>

#include "spcm/sim/nnls.hpp"

namespace spcm::actuators {

Eigen::Matrix<double, 6, 1> Thruster::unit_wrench() const {
  Eigen::Matrix<double, 6, 1> w;
  w.head<3>() = direction;
  w.tail<3>() = position.cross(direction);
  return w;
}

void Thruster::validate(const std::string& path, std::vector<std::string>& errors) const {
  if (std::abs(direction.norm() - 1.0) > 1e-9) errors.push_back(path + ".direction: must be a unit vector");
  if (!(thrust > 0.0)) errors.push_back(path + ".thrust: must be positive");
  if (!(pwm_period > 0.0)) errors.push_back(path + ".pwm_period: must be positive");
  if (!(quantum > 0.0) || quantum > pwm_period) errors.push_back(path + ".quantum: must be in (0, pwm_period]");
  if (!(delay_on >= 0.0) || !(delay_off >= 0.0)) errors.push_back(path + ".delays: must be non-negative");
  if (delay_on >= pwm_period) errors.push_back(path + ".delay_on: must be shorter than the PWM period");
  // The smallest realizable pulse is one quantum.
  if (!(mib >= thrust * quantum * (1.0 - 1e-12)))
    errors.push_back(path + ".mib: must be at least thrust x on-time quantum");
  if (mib > thrust * pwm_period) errors.push_back(path + ".mib: exceeds a full PWM cycle");
}

Pulse pwm_modulate(double impulse_cmd, const Thruster& t) {
  Pulse p;
  if (!(impulse_cmd > 0.0)) return p;
  if (impulse_cmd < t.mib) {
    p.below_mib = true;
    return p;
  }
  const double wanted = impulse_cmd / t.thrust;
  double on = 0.0;
  if (wanted >= t.pwm_period) {
    on = t.pwm_period;
    p.saturated = true;
  } else {
    on = std::round(wanted / t.quantum) * t.quantum;
    const double min_on = std::ceil(t.mib / t.thrust / t.quantum - 1e-9) * t.quantum;
    on = std::max(on, min_on);
    if (on >= t.pwm_period) {
      on = t.pwm_period;
      p.saturated = true;
    }
  }
  p.on_time = on;
  p.start = t.delay_on;
  p.end = on + t.delay_off;
  return p;
}

std::vector<Thruster> parallelepiped_layout(double a, double b, const Thruster& proto) {
  using V = Eigen::Vector3d;
  struct Spec {
    V pos, dir;
  };
  const Spec specs[12] = {
      {V(-a, b, 0), V(1, 0, 0)},  {V(-a, -b, 0), V(1, 0, 0)},  {V(a, b, 0), V(-1, 0, 0)},  {V(a, -b, 0), V(-1, 0, 0)},
      {V(0, -a, b), V(0, 1, 0)},  {V(0, -a, -b), V(0, 1, 0)},  {V(0, a, b), V(0, -1, 0)},  {V(0, a, -b), V(0, -1, 0)},
      {V(b, 0, -a), V(0, 0, 1)},  {V(-b, 0, -a), V(0, 0, 1)},  {V(b, 0, a), V(0, 0, -1)},  {V(-b, 0, a), V(0, 0, -1)},
  };
  std::vector<Thruster> out;
  for (const auto& s : specs) {
    Thruster t = proto;
    t.position = s.pos;
    t.direction = s.dir;
    out.push_back(t);
  }
  return out;
}

Eigen::VectorXd rcs_allocate(const Eigen::Matrix<double, 6, 1>& wrench, std::span<const Thruster> thrusters) {
  const auto n = static_cast<Eigen::Index>(thrusters.size());
  Eigen::MatrixXd b(6, n);
  for (Eigen::Index i = 0; i < n; ++i) b.col(i) = thrusters[static_cast<std::size_t>(i)].unit_wrench();
  if (wrench.isZero(0.0)) return Eigen::VectorXd::Zero(n);
  const auto sol = sim::nnls(b, wrench);
  const Eigen::Matrix<double, 6, 1> achieved = b * sol.x;
  if (sol.residual > 1e-9 * std::max(1.0, wrench.norm())) {
    throw InfeasibleWrench(fmt::format("wrench outside the thruster cone (residual {:.3g})", sol.residual), achieved);
  }
  Eigen::VectorXd impulses(n);
  for (Eigen::Index i = 0; i < n; ++i) impulses(i) = sol.x(i) * thrusters[static_cast<std::size_t>(i)].pwm_period;
  return impulses;
}

}  // namespace spcm::actuators
