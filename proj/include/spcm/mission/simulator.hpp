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

#include <optional>
#include <string>
#include <vector>

#include "spcm/mission/scenario.hpp"
#include "spcm/mission/scoring.hpp"
#include "spcm/mission/signal_log.hpp"

namespace spcm::mission {

struct Event {
  double t = 0.0;
  std::string type;    // mode_transition, controller_switch, wheel_torque_limit, ...
  std::string detail;
};

struct SimulationOptions {
  std::optional<double> duration;  // overrides timeline.total
};

struct SimulationResult {
  SignalLog log;
  std::vector<Event> events;
  MissionScore score;
  bool diverged = false;
  double failure_time = 0.0;
  std::string failure;
};

/// Column order of the time-series log.
const std::vector<std::string>& log_columns();

/// Closed-loop mission with the baseline controllers. The scenario must
/// validate (ConfigError otherwise). A diverging run stops early and is
/// reported in the result, not thrown. Deterministic for a given scenario.
SimulationResult simulate(const Scenario& scenario, const SimulationOptions& options = {});

/// Logged values carry this many significant digits, the same as the CSV,
/// so scoring the written file reproduces the in-memory score.
inline constexpr int kLogDigits = 10;
double log_round(double v);

}  // namespace spcm::mission
