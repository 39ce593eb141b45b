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

#include "spcm/actuators/reaction_wheel.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "spcm/error.hpp"

namespace spcm::actuators {

double stribeck_torque(const StribeckFriction& f, double omega) {
  const double x = omega / f.stribeck_rate;
  const double sign = omega > 0.0 ? 1.0 : (omega < 0.0 ? -1.0 : 0.0);
  return -sign * (f.coulomb + (f.stiction - f.coulomb) * std::exp(-x * x)) - f.viscous * omega;
}

void ReactionWheel::validate(const std::string& path, std::vector<std::string>& errors) const {
  auto need = [&](bool ok, const char* what) {
    if (!ok) errors.push_back(path + "." + what);
  };
  need(std::abs(spin_axis.norm() - 1.0) < 1e-9, "spin_axis: must be a unit vector");
  need(rotor_inertia > 0.0, "rotor_inertia: must be positive");
  need(max_torque > 0.0, "max_torque: must be positive");
  need(max_momentum > 0.0, "max_momentum: must be positive");
  need(static_imbalance >= 0.0, "static_imbalance: must be non-negative");
  need(dynamic_imbalance >= 0.0, "dynamic_imbalance: must be non-negative");
  need(friction.coulomb >= 0.0, "friction.coulomb: must be non-negative");
  need(friction.stiction >= friction.coulomb, "friction.stiction: must be at least the Coulomb level");
  need(friction.stribeck_rate > 0.0, "friction.stribeck_rate: must be positive");
  need(friction.viscous >= 0.0, "friction.viscous: must be non-negative");
  need(stick_band >= 0.0, "stick_band: must be non-negative");
  need(spikes.rate_per_hour >= 0.0, "spikes.rate_per_hour: must be non-negative");
  need(spikes.amplitude_min >= 0.0 && spikes.amplitude_max >= spikes.amplitude_min,
       "spikes.amplitude: need 0 <= min <= max");
  need(noise_psd >= 0.0, "noise_psd: must be non-negative");
  for (std::size_t i = 0; i < harmonics.size(); ++i) {
    const auto& h = harmonics[i];
    if (!(h.order > 0.0) || h.force_coeff < 0.0 || h.torque_coeff < 0.0)
      errors.push_back(fmt::format("{}.harmonics[{}]: order must be positive, coefficients non-negative", path, i));
  }
}

Vector6 imbalance_wrench(const ReactionWheel& w, double speed, double phase, const WheelFidelity& flags) {
  Vector6 out = Vector6::Zero();
  if (!flags.imbalance) return out;
  const double s2 = speed * speed;
  out(0) = w.static_imbalance * s2 * std::cos(phase);
  out(1) = w.static_imbalance * s2 * std::sin(phase);
  out(3) = w.dynamic_imbalance * s2 * std::cos(phase + w.dynamic_phase);
  out(4) = w.dynamic_imbalance * s2 * std::sin(phase + w.dynamic_phase);
  if (flags.harmonics) {
    for (const auto& h : w.harmonics) {
      const double a = h.order * phase + h.phase;
      out(0) += h.force_coeff * s2 * std::cos(a);
      out(1) += h.force_coeff * s2 * std::sin(a);
      out(3) += h.torque_coeff * s2 * std::cos(a);
      out(4) += h.torque_coeff * s2 * std::sin(a);
    }
  }
  return out;
}

WheelStepResult rw_step(const ReactionWheel& w, WheelState& state, double torque_cmd, double dt,
                        const WheelFidelity& flags, sim::Rng& rng) {
  WheelStepResult r;
  const double omega = state.speed;
  r.wrench = imbalance_wrench(w, omega, state.phase, flags);
  if (flags.noise && w.noise_psd > 0.0) {
    const double sigma = std::sqrt(w.noise_psd / (2.0 * dt));
    r.noise = Eigen::Vector2d(sigma * rng.normal(), sigma * rng.normal());
    r.wrench(3) += r.noise(0);
    r.wrench(4) += r.noise(1);
  }

  double cmd = torque_cmd;
  if (flags.saturation && std::abs(cmd) > w.max_torque) {
    cmd = std::clamp(cmd, -w.max_torque, w.max_torque);
    r.torque_clipped = true;
  }

  double delivered = cmd;
  state.stuck = false;
  if (flags.friction) {
    const auto& f = w.friction;
    if (std::abs(omega) < w.stick_band && std::abs(cmd) < f.stiction) {
      state.stuck = true;
      delivered = -omega * w.rotor_inertia / dt;  // brings the rotor to rest this tick
    } else if (omega == 0.0) {
      delivered = cmd - (cmd > 0.0 ? 1.0 : -1.0) * f.stiction;  // breakaway
      if (std::abs(cmd) < f.stiction) delivered = 0.0;
    } else {
      delivered = cmd + stribeck_torque(f, omega);
      // Friction alone cannot reverse the rotor.
      const double next = omega + delivered * dt / w.rotor_inertia;
      if (std::abs(cmd) < f.stiction && next * omega < 0.0) {
        delivered = -omega * w.rotor_inertia / dt;
        state.stuck = true;
      }
    }
  }

  if (flags.spikes && w.spikes.rate_per_hour > 0.0) {
    const double p = 1.0 - std::exp(-w.spikes.rate_per_hour / 3600.0 * dt);
    if (rng.bernoulli(p)) {
      const double amp = rng.uniform(w.spikes.amplitude_min, w.spikes.amplitude_max);
      r.spike_torque = rng.bernoulli(0.5) ? amp : -amp;
      r.spike = true;
      delivered += r.spike_torque;
    }
  }

  double next = omega + delivered * dt / w.rotor_inertia;
  if (flags.saturation) {
    const double limit = w.max_momentum / w.rotor_inertia;
    if (std::abs(next) > limit) {
      next = std::clamp(next, -limit, limit);
      delivered = (next - omega) * w.rotor_inertia / dt;
      r.momentum_saturated = true;
    }
  }
  if (state.stuck) next = 0.0;

  state.phase += omega * dt + 0.5 * (delivered / w.rotor_inertia) * dt * dt;
  state.speed = next;
  r.speed = next;
  r.delivered_torque = delivered;
  return r;
}

RWPyramid RWPyramid::make(const ReactionWheel& prototype, double cant, std::array<double, 4> azimuth) {
  RWPyramid p;
  p.cant = cant;
  p.azimuth = azimuth;
  for (std::size_t i = 0; i < 4; ++i) {
    p.wheels[i] = prototype;
    p.wheels[i].spin_axis = Eigen::Vector3d(std::cos(cant) * std::cos(azimuth[i]),
                                            std::cos(cant) * std::sin(azimuth[i]), std::sin(cant));
  }
  return p;
}

Eigen::Matrix<double, 3, 4> RWPyramid::allocation_matrix() const {
  Eigen::Matrix<double, 3, 4> a;
  for (int i = 0; i < 4; ++i) a.col(i) = wheels[static_cast<std::size_t>(i)].spin_axis;
  return a;
}

Eigen::Vector4d RWPyramid::null_vector() const {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(allocation_matrix(), Eigen::ComputeFullV);
  Eigen::Vector4d n = svd.matrixV().col(3);
  // Deterministic sign: first non-negligible entry positive.
  for (int i = 0; i < 4; ++i) {
    if (std::abs(n(i)) > 1e-12) {
      if (n(i) < 0.0) n = -n;
      break;
    }
  }
  return n;
}

void RWPyramid::validate(const std::string& path, std::vector<std::string>& errors) const {
  for (std::size_t i = 0; i < 4; ++i) wheels[i].validate(fmt::format("{}.wheels[{}]", path, i), errors);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(allocation_matrix());
  const auto s = svd.singularValues();
  if (!(s(2) > 1e-9 * s(0))) errors.push_back(path + ": wheel axes do not span three dimensions");
}

Eigen::Vector4d rw_allocate(const Eigen::Vector3d& torque, const RWPyramid& pyramid) {
  const Eigen::Matrix<double, 3, 4> a = pyramid.allocation_matrix();
  // A^T (A A^T)^-1 tau; A A^T is 3x3 and well conditioned for a valid pyramid.
  const Eigen::Matrix3d aat = a * a.transpose();
  return a.transpose() * aat.ldlt().solve(torque);
}

}  // namespace spcm::actuators
