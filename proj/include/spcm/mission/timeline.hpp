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

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spcm::mission {

enum class Phase { SlewTransient = 0, SlewSteady, CoarseTransient, CoarseSteady, FineTransient, FineSteady };

inline constexpr std::array<Phase, 6> kPhases = {Phase::SlewTransient, Phase::SlewSteady,    Phase::CoarseTransient,
                                                 Phase::CoarseSteady,  Phase::FineTransient, Phase::FineSteady};

std::string_view phase_name(Phase p);
std::optional<Phase> phase_from_name(std::string_view name);
int phase_index(Phase p);

/// Which control window (slew = 0, coarse = 1, fine = 2) a phase belongs to.
int window_of(Phase p);

/// Pointing requirements per window. Coarse and slew APE act on the hub
/// attitude error, the fine set on the line of sight (rad).
struct Requirements {
  double ape1 = 2e-3;
  double ape2 = 2e-4;
  double rpe2 = 5e-5;
  double window2 = 10.0;   // s, RPE2 window
  double ape3 = 2e-5;
  double rpe3 = 5e-6;
  double pde3 = 5e-6;
  double window3 = 1.0;    // s, RPE3 and PDE3 window
  double gap3 = 10.0;      // s, PDE3 separation

  void validate(std::vector<std::string>& errors) const;
};

struct ModeTimeline {
  double t1 = 30.0;        // SlewSteady duration, s
  double t2 = 60.0;        // CoarseSteady duration, s
  double t3 = 200.0;       // science duration the mission is planned for, s
  double dwell = 10.0;     // APE1 must hold this long before the slew is declared over, s
  double total = 500.0;    // mission length, s
  Requirements req;

  void validate(std::vector<std::string>& errors) const;
};

/// Live monitor values over the samples taken since the current phase began.
struct MonitorReading {
  double ape_now = 0.0;      // latest |e|
  double ape_window = 0.0;   // max |e| over the last window
  double rpe_window = 0.0;   // RPE of the last window
  bool window_full = false;  // a full window of in-phase samples exists
};

struct ModeState {
  Phase phase = Phase::SlewTransient;
  double entered = 0.0;
  std::optional<double> below_since;  // slew dwell bookkeeping
};

struct ModeInputs {
  MonitorReading coarse;  // attitude error
  MonitorReading fine;    // line of sight
  bool slew_complete = false;
};

/// Advances the mode machine at time t; returns true on a transition. Phases
/// only move forward. `tick` is the controller period; steady phases end at
/// the first tick at or after their fixed duration.
bool mode_update(ModeState& state, double t, const ModeInputs& in, const ModeTimeline& timeline, double tick);

}  // namespace spcm::mission
