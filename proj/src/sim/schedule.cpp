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

#include "spcm/sim/schedule.hpp"

#include <cmath>

#include <fmt/format.h>

#include "spcm/error.hpp"

namespace spcm::sim {

const DeviceTicks& MultirateSchedule::device(const std::string& name) const {
  for (const auto& d : devices_) {
    if (d.name == name) return d;
  }
  throw LabelError(fmt::format("no device '{}' in schedule", name));
}

std::vector<std::uint64_t> MultirateSchedule::ticks(const std::string& name) const {
  const auto& dev = device(name);
  std::vector<std::uint64_t> out;
  out.reserve(num_steps_ / dev.period_steps + 1);
  for (std::uint64_t k = 0; k < num_steps_; k += dev.period_steps) out.push_back(k);
  return out;
}

std::optional<std::uint64_t> commensurate_period(double rate_hz, double base_dt, std::string* why) {
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) {
    if (why) *why = fmt::format("rate {} Hz must be finite and positive", rate_hz);
    return std::nullopt;
  }
  const double ratio = 1.0 / (rate_hz * base_dt);
  const double rounded = std::round(ratio);
  if (rounded < 1.0) {
    if (why) *why = fmt::format("rate {} Hz exceeds the base rate {} Hz", rate_hz, 1.0 / base_dt);
    return std::nullopt;
  }
  if (std::abs(ratio - rounded) > 1e-9 * ratio) {
    if (why) {
      *why = fmt::format("rate {} Hz is not commensurate with base step {} s ({} steps per tick)",
                         rate_hz, base_dt, ratio);
    }
    return std::nullopt;
  }
  return static_cast<std::uint64_t>(rounded);
}

MultirateSchedule multirate_schedule(std::span<const DeviceRate> rates, double t_end,
                                     double base_dt) {
  if (!(base_dt > 0.0)) throw ConfigError(fmt::format("base step must be > 0 (got {})", base_dt));
  std::vector<std::string> errors;
  std::vector<DeviceTicks> devices;
  for (const auto& r : rates) {
    std::string why;
    if (auto period = commensurate_period(r.rate_hz, base_dt, &why)) {
      devices.push_back({r.name, r.rate_hz, *period});
    } else {
      errors.push_back(fmt::format("{}: {}", r.name, why));
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  const auto steps = static_cast<std::uint64_t>(std::llround(t_end / base_dt));
  return MultirateSchedule(std::move(devices), steps, base_dt);
}

}  // namespace spcm::sim
