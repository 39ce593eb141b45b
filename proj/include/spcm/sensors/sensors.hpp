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
#include <deque>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spcm/sim/quaternion.hpp"
#include "spcm/sim/random.hpp"

namespace spcm::sensors {

struct StarTrackerSpec {
  double rate_hz = 10.0;
  double latency = 0.0;                               // s
  Eigen::Vector3d noise_std = Eigen::Vector3d::Zero(); // rad, per body axis
  double tracking_limit = 0.01;                       // rad/s, invalid above

  void validate(const std::string& path, std::vector<std::string>& errors) const;
};

struct StrMeasurement {
  sim::Quaternion q = sim::Quaternion::Identity();
  bool valid = true;
};

/// `q_true` and `omega_true` are the truth at t - latency (the caller owns the delay line).
StrMeasurement str_measure(const StarTrackerSpec& spec, const sim::Quaternion& q_true,
                           const Eigen::Vector3d& omega_true, sim::Rng& rng);

enum class GyroGrade { Coarse, Fine };

struct GyroSpec {
  double rate_hz = 100.0;
  double latency = 0.0;
  double noise_density = 0.0;     // angle random walk, rad/s/sqrt(Hz)
  Eigen::Vector3d bias = Eigen::Vector3d::Zero();  // rad/s, constant part
  double bias_walk_density = 0.0; // rate random walk, rad/s/sqrt(s)
  double quantization = 0.0;      // rad/s, 0 = none

  void validate(const std::string& path, std::vector<std::string>& errors) const;
};

struct GyroState {
  Eigen::Vector3d bias_walk = Eigen::Vector3d::Zero();
};

/// One gyro sample; `sample_dt` is the gyro tick interval.
Eigen::Vector3d gyro_measure(const GyroSpec& spec, GyroState& state, const Eigen::Vector3d& omega_true,
                             double sample_dt, sim::Rng& rng);

struct FgsSpec {
  double rate_hz = 10.0;
  double exposure = 0.05;          // s, at most one tick interval
  double noise_std = 0.0;          // rad per axis
  double fov_half_angle = 1e-3;    // rad
  Eigen::Vector2d alignment_error = Eigen::Vector2d::Zero();  // rad, STR-to-FGS frame error

  void validate(const std::string& path, std::vector<std::string>& errors) const;
};

struct FgsMeasurement {
  Eigen::Vector2d los = Eigen::Vector2d::Zero();
  bool valid = true;
};

/// Uniform mean of the true LOS samples over the exposure plus noise; invalid
/// if any sample leaves the field of view.
FgsMeasurement fgs_measure(const FgsSpec& spec, std::span<const Eigen::Vector2d> exposure_samples, sim::Rng& rng);

/// Fixed-length history of base-rate samples for latency and exposure windows.
template <class T>
class History {
public:
  explicit History(std::size_t capacity = 1) : capacity_(capacity == 0 ? 1 : capacity) {}

  void push(const T& value) {
    buf_.push_back(value);
    if (buf_.size() > capacity_) buf_.pop_front();
  }
  /// Sample `steps` base steps ago (0 = newest); clamps to the oldest kept.
  const T& ago(std::size_t steps) const {
    const std::size_t n = buf_.size();
    return buf_[n - 1 - std::min(steps, n - 1)];
  }
  /// Newest `count` samples, oldest first.
  std::vector<T> last(std::size_t count) const {
    count = std::min(count, buf_.size());
    return std::vector<T>(buf_.end() - static_cast<std::ptrdiff_t>(count), buf_.end());
  }
  std::size_t size() const noexcept { return buf_.size(); }
  bool empty() const noexcept { return buf_.empty(); }

private:
  std::size_t capacity_;
  std::deque<T> buf_;
};

}  // namespace spcm::sensors
