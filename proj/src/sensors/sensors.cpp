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

#include "spcm/sensors/sensors.hpp"

#include <cmath>

namespace spcm::sensors {

namespace {

void common(const std::string& path, double rate, double latency, std::vector<std::string>& errors) {
  if (!(rate > 0.0)) errors.push_back(path + ".rate: must be positive");
  if (!(latency >= 0.0)) errors.push_back(path + ".latency: must be non-negative");
}

}  // namespace

void StarTrackerSpec::validate(const std::string& path, std::vector<std::string>& errors) const {
  common(path, rate_hz, latency, errors);
  if (!(noise_std.minCoeff() >= 0.0)) errors.push_back(path + ".noise: must be non-negative");
  if (!(tracking_limit > 0.0)) errors.push_back(path + ".tracking_limit: must be positive");
}

void GyroSpec::validate(const std::string& path, std::vector<std::string>& errors) const {
  common(path, rate_hz, latency, errors);
  if (!(noise_density >= 0.0)) errors.push_back(path + ".noise_density: must be non-negative");
  if (!(bias_walk_density >= 0.0)) errors.push_back(path + ".bias_walk_density: must be non-negative");
  if (!(quantization >= 0.0)) errors.push_back(path + ".quantization: must be non-negative");
  if (!bias.allFinite()) errors.push_back(path + ".bias: non-finite");
}

void FgsSpec::validate(const std::string& path, std::vector<std::string>& errors) const {
  common(path, rate_hz, 0.0, errors);
  if (!(noise_std >= 0.0)) errors.push_back(path + ".noise: must be non-negative");
  if (!(fov_half_angle > 0.0)) errors.push_back(path + ".fov_half_angle: must be positive");
  if (!(exposure > 0.0)) errors.push_back(path + ".exposure: must be positive");
  if (rate_hz > 0.0 && exposure > 1.0 / rate_hz * (1.0 + 1e-12))
    errors.push_back(path + ".exposure: longer than the sampling interval");
}

StrMeasurement str_measure(const StarTrackerSpec& spec, const sim::Quaternion& q_true,
                           const Eigen::Vector3d& omega_true, sim::Rng& rng) {
  Eigen::Vector3d err;
  for (int i = 0; i < 3; ++i) err(i) = spec.noise_std(i) * rng.normal();
  StrMeasurement m;
  m.q = (q_true * sim::quat_exp(err)).normalized();
  m.valid = omega_true.norm() <= spec.tracking_limit;
  return m;
}

Eigen::Vector3d gyro_measure(const GyroSpec& spec, GyroState& state, const Eigen::Vector3d& omega_true,
                             double sample_dt, sim::Rng& rng) {
  const double white = spec.noise_density / std::sqrt(sample_dt);
  const double walk = spec.bias_walk_density * std::sqrt(sample_dt);
  Eigen::Vector3d out;
  for (int i = 0; i < 3; ++i) {
    const double n = rng.normal();
    const double b = rng.normal();
    out(i) = omega_true(i) + spec.bias(i) + state.bias_walk(i) + white * n;
    state.bias_walk(i) += walk * b;
    if (spec.quantization > 0.0) out(i) = std::round(out(i) / spec.quantization) * spec.quantization;
  }
  return out;
}

FgsMeasurement fgs_measure(const FgsSpec& spec, std::span<const Eigen::Vector2d> samples, sim::Rng& rng) {
  FgsMeasurement m;
  const double n0 = rng.normal();
  const double n1 = rng.normal();
  if (samples.empty()) {
    m.valid = false;
    return m;
  }
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  for (const auto& s : samples) {
    sum += s;
    if (s.norm() > spec.fov_half_angle) m.valid = false;
  }
  m.los = sum / static_cast<double>(samples.size()) + spec.alignment_error +
          spec.noise_std * Eigen::Vector2d(n0, n1);
  return m;
}

}  // namespace spcm::sensors
