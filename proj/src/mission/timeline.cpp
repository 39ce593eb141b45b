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


#include "spcm/mission/timeline.hpp"

#include <cmath>

#include <fmt/format.h>

namespace spcm::mission {

namespace {

const char* const kNames[6] = {"SlewTransient", "SlewSteady", "CoarseTransient",
                               "CoarseSteady",  "FineTransient", "FineSteady"};

void positive(double v, const char* name, std::vector<std::string>& errors) {
  if (!(v > 0.0) || !std::isfinite(v)) errors.push_back(fmt::format("timeline.{}: must be positive", name));
}

}  // namespace

std::string_view phase_name(Phase p) { return kNames[phase_index(p)]; }

std::optional<Phase> phase_from_name(std::string_view name) {
  for (Phase p : kPhases)
    if (phase_name(p) == name) return p;
  return std::nullopt;
}

int phase_index(Phase p) { return static_cast<int>(p); }

int window_of(Phase p) { return phase_index(p) / 2; }

void Requirements::validate(std::vector<std::string>& errors) const {
  positive(ape1, "requirements.ape1", errors);
  positive(ape2, "requirements.ape2", errors);
  positive(rpe2, "requirements.rpe2", errors);
  positive(window2, "requirements.window2", errors);
  positive(ape3, "requirements.ape3", errors);
  positive(rpe3, "requirements.rpe3", errors);
  positive(pde3, "requirements.pde3", errors);
  positive(window3, "requirements.window3", errors);
  if (!(gap3 >= 0.0)) errors.push_back("timeline.requirements.gap3: must be non-negative");
  if (ape2 > ape1) errors.push_back(fmt::format("timeline.requirements: ape2 ({}) exceeds ape1 ({})", ape2, ape1));
  if (ape3 > ape2) errors.push_back(fmt::format("timeline.requirements: ape3 ({}) exceeds ape2 ({})", ape3, ape2));
}

void ModeTimeline::validate(std::vector<std::string>& errors) const {
  positive(t1, "t1", errors);
  positive(t2, "t2", errors);
  positive(t3, "t3", errors);
  positive(total, "total", errors);
  if (!(dwell >= 0.0)) errors.push_back("timeline.dwell: must be non-negative");
  if (t1 + t2 + t3 > total)
    errors.push_back(fmt::format("timeline: t1 + t2 + t3 = {} s exceeds the mission length {} s", t1 + t2 + t3, total));
  req.validate(errors);
}

bool mode_update(ModeState& s, double t, const ModeInputs& in, const ModeTimeline& tl, double tick) {
  const double eps = 1e-9 * std::max(1.0, t) + 1e-3 * tick;
  std::optional<Phase> next;
  switch (s.phase) {
    case Phase::SlewTransient:
      if (in.slew_complete && in.coarse.ape_now <= tl.req.ape1) {
        if (!s.below_since) s.below_since = t;
        if (t - *s.below_since >= tl.dwell - eps) next = Phase::SlewSteady;
      } else {
        s.below_since.reset();
      }
      break;
    case Phase::SlewSteady:
      if (t - s.entered >= tl.t1 - eps) next = Phase::CoarseTransient;
      break;
    case Phase::CoarseTransient:
      if (in.coarse.window_full && in.coarse.ape_window <= tl.req.ape2 && in.coarse.rpe_window <= tl.req.rpe2)
        next = Phase::CoarseSteady;
      break;
    case Phase::CoarseSteady:
      if (t - s.entered >= tl.t2 - eps) next = Phase::FineTransient;
      break;
    case Phase::FineTransient:
      if (in.fine.window_full && in.fine.ape_window <= tl.req.ape3 && in.fine.rpe_window <= tl.req.rpe3)
        next = Phase::FineSteady;
      break;
    case Phase::FineSteady:
      break;
  }
  if (!next) return false;
  s.phase = *next;
  s.entered = t;
  s.below_since.reset();
  return true;
}

}  // namespace spcm::mission
