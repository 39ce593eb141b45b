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

#include "spcm/mission/signal_log.hpp"
#include "spcm/mission/timeline.hpp"

namespace spcm::mission {

struct PhaseEntry {
  Phase phase = Phase::SlewTransient;
  bool reached = false;
  double start = 0.0;  // s
  double end = 0.0;    // s, start of the next phase or end of the log
};

struct RequirementVerdict {
  std::string name;       // "APE1", "RPE2", ...
  Phase phase = Phase::SlewSteady;
  double threshold = 0.0;
  double value = 0.0;     // worst value over the phase
  bool evaluated = false; // phase reached and long enough
  bool pass = false;
  std::optional<double> first_violation;  // s; window start for RPE/PDE
};

struct MissionScore {
  std::vector<PhaseEntry> phases;  // all six, in order
  std::vector<RequirementVerdict> verdicts;
  double t3_achieved = 0.0;  // s, passing tail of FineSteady
  double t3_planned = 0.0;
  bool completed = false;    // every phase reached
  std::string note;

  double fraction() const noexcept {
    return t3_planned > 0.0 ? std::min(1.0, t3_achieved / t3_planned) : 0.0;
  }
};

/// Needs columns t, phase, att_err_{x,y,z}, los_{x,y}. Slew and coarse
/// requirements act on the attitude error, the fine set on the line of
/// sight. Every sample in a failing APE sample, RPE window or PDE window pair
/// is marked; t3_achieved is the length of the unmarked tail of FineSteady.
/// A FineSteady interval shorter than 2 window3 + gap3 scores 0.
MissionScore score_mission(const SignalLog& log, const ModeTimeline& timeline);

}  // namespace spcm::mission
