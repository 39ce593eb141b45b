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

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace spcm::sim {

/// x' = f(t, x, u)
using VectorField =
    std::function<Eigen::VectorXd(double t, const Eigen::VectorXd& x, const Eigen::VectorXd& u)>;
using InputFunction = std::function<Eigen::VectorXd(double t)>;

/// Uniformly sampled solution; times[k] = k * dt.
struct Trajectory {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;

  std::size_t size() const noexcept { return times.size(); }
};

/// One classical RK4 step. The input is held at its value at t over the step.
Eigen::VectorXd rk4_step(const VectorField& f, double t, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& u, double dt);

/// Fixed-step RK4 from t=0 to t_end in round(t_end/dt) steps. The input
/// function is sampled at the start of each step (zero-order hold).
/// Throws DivergedSimulation on a non-finite state, DimensionError if f
/// returns the wrong size.
Trajectory integrate_fixed_step(const VectorField& f, const Eigen::VectorXd& x0, double dt,
                                double t_end, const InputFunction& input = {});

/// Throws ConfigError when omega_max * dt exceeds `limit` (default 0.3).
void validate_step_size(double omega_max, double dt, double limit = 0.3);

}  // namespace spcm::sim
