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

#include "spcm/sim/integrator.hpp"

#include <cmath>

#include <fmt/format.h>

#include "spcm/error.hpp"

namespace spcm::sim {

Eigen::VectorXd rk4_step(const VectorField& f, double t, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& u, double dt) {
  const double half = 0.5 * dt;
  Eigen::VectorXd k1 = f(t, x, u);
  if (k1.size() != x.size()) {
    throw DimensionError(
        fmt::format("vector field returned {} entries for a {}-state", k1.size(), x.size()));
  }
  Eigen::VectorXd k2 = f(t + half, x + half * k1, u);
  Eigen::VectorXd k3 = f(t + half, x + half * k2, u);
  Eigen::VectorXd k4 = f(t + dt, x + dt * k3, u);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory integrate_fixed_step(const VectorField& f, const Eigen::VectorXd& x0, double dt,
                                double t_end, const InputFunction& input) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError(fmt::format("dt must be > 0 (got {})", dt));
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw ConfigError(fmt::format("t_end must be >= 0 (got {})", t_end));
  }
  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));

  Trajectory traj;
  traj.dt = dt;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(x0);

  const Eigen::VectorXd no_input(0);
  Eigen::VectorXd x = x0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    x = rk4_step(f, t, x, input ? input(t) : no_input, dt);
    if (!x.allFinite()) throw DivergedSimulation(t + dt);
    traj.times.push_back(static_cast<double>(k + 1) * dt);
    traj.states.push_back(x);
  }
  return traj;
}

void validate_step_size(double omega_max, double dt, double limit) {
  if (omega_max * dt > limit) {
    throw ConfigError(fmt::format(
        "step size {} s too large for fastest mode {:.6g} rad/s (omega*dt = {:.4g} > {})", dt,
        omega_max, omega_max * dt, limit));
  }
}

}  // namespace spcm::sim
