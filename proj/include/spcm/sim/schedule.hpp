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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spcm::sim {

struct DeviceRate {
  std::string name;
  double rate_hz = 0.0;
};

/// Tick bookkeeping for one sampled device on the base step grid.
struct DeviceTicks {
  std::string name;
  double rate_hz = 0.0;
  std::uint64_t period_steps = 1;

  bool is_tick(std::uint64_t step) const noexcept { return step % period_steps == 0; }
};

class MultirateSchedule {
public:
  MultirateSchedule(std::vector<DeviceTicks> devices, std::uint64_t num_steps, double base_dt)
      : devices_(std::move(devices)), num_steps_(num_steps), base_dt_(base_dt) {}

  const std::vector<DeviceTicks>& devices() const noexcept { return devices_; }
  std::uint64_t num_steps() const noexcept { return num_steps_; }
  double base_dt() const noexcept { return base_dt_; }

  const DeviceTicks& device(const std::string& name) const;

  /// Step indices in [0, num_steps) on which the device updates.
  std::vector<std::uint64_t> ticks(const std::string& name) const;

private:
  std::vector<DeviceTicks> devices_;
  std::uint64_t num_steps_;
  double base_dt_;
};

/// Throws ConfigError naming every device whose period is not an integer
/// multiple of base_dt (1e-9 relative) or whose rate exceeds 1/base_dt.
MultirateSchedule multirate_schedule(std::span<const DeviceRate> rates, double t_end,
                                     double base_dt);

/// Checks one rate; returns the period in base steps or an error message.
std::optional<std::uint64_t> commensurate_period(double rate_hz, double base_dt,
                                                 std::string* why = nullptr);

/// Sample-and-hold: updates only on ticks, returns the last sample otherwise.
template <typename T>
class ZeroOrderHold {
public:
  explicit ZeroOrderHold(T initial = T{}) : value_(std::move(initial)) {}

  const T& update(bool tick, const T& sample) {
    if (tick) value_ = sample;
    return value_;
  }
  const T& value() const noexcept { return value_; }
  void reset(T value) { value_ = std::move(value); }

private:
  T value_;
};

}  // namespace spcm::sim
