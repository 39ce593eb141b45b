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


#include "spcm/mission/scoring.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "spcm/metrics/pointing.hpp"

namespace spcm::mission {

namespace {

struct Span {
  std::size_t first = 0, count = 0;
};

Eigen::MatrixXd block(const SignalLog& log, const Span& s, const std::vector<std::size_t>& cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(s.count), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < s.count; ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = log.at(s.first + r, cols[c]);
  return m;
}

// Marks bad samples in `fail` (difference array of size n + 1) and fills the verdict.
void check_ape(const Eigen::MatrixXd& e, double dt, double t0, double limit, RequirementVerdict& v,
               std::vector<int>* fail) {
  v.evaluated = true;
  v.value = 0.0;
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    const double a = e.row(i).norm();
    v.value = std::max(v.value, a);
    if (a > limit) {
      if (!v.first_violation) v.first_violation = t0 + static_cast<double>(i) * dt;
      if (fail) {
        (*fail)[static_cast<std::size_t>(i)] += 1;
        (*fail)[static_cast<std::size_t>(i) + 1] -= 1;
      }
    }
  }
  v.pass = v.value <= limit;
}

void check_rpe(const Eigen::MatrixXd& e, double rate, double t0, double window, double limit, RequirementVerdict& v,
               std::vector<int>* fail) {
  const std::size_t w = metrics::window_samples(window, 1.0 / rate);
  if (static_cast<std::size_t>(e.rows()) < w) return;
  metrics::PointingRecord rec{rate, e};
  const auto s = metrics::rpe(rec, window);
  v.evaluated = true;
  v.value = s.summary;
  for (Eigen::Index i = 0; i < s.norm.size(); ++i) {
    if (s.norm(i) <= limit) continue;
    if (!v.first_violation) v.first_violation = t0 + static_cast<double>(i) / rate;
    if (fail) {
      (*fail)[static_cast<std::size_t>(i)] += 1;
      (*fail)[static_cast<std::size_t>(i) + w] -= 1;
    }
  }
  v.pass = v.value <= limit;
}

void check_pde(const Eigen::MatrixXd& e, double rate, double t0, double window, double gap, double limit,
               RequirementVerdict& v, std::vector<int>* fail) {
  const std::size_t w = metrics::window_samples(window, 1.0 / rate);
  const auto offset = static_cast<std::size_t>(std::llround((window + gap) * rate));
  if (static_cast<std::size_t>(e.rows()) < offset + w) return;
  metrics::PointingRecord rec{rate, e};
  const auto s = metrics::pde(rec, window, gap);
  v.evaluated = true;
  v.value = s.summary;
  for (Eigen::Index i = 0; i < s.norm.size(); ++i) {
    if (s.norm(i) <= limit) continue;
    if (!v.first_violation) v.first_violation = t0 + static_cast<double>(i) / rate;
    if (fail) {
      const auto a = static_cast<std::size_t>(i);
      (*fail)[a] += 1;
      (*fail)[a + w] -= 1;
      (*fail)[a + offset] += 1;
      (*fail)[a + offset + w] -= 1;
    }
  }
  v.pass = v.value <= limit;
}

}  // namespace

MissionScore score_mission(const SignalLog& log, const ModeTimeline& tl) {
  MissionScore out;
  out.t3_planned = tl.t3;
  const auto& req = tl.req;
  const std::size_t n = log.rows();
  const double rate = log.rate();
  const double dt = 1.0 / rate;
  const std::size_t ct = log.column("t"), cp = log.column("phase");
  const std::vector<std::size_t> att = {log.column("att_err_x"), log.column("att_err_y"), log.column("att_err_z")};
  const std::vector<std::size_t> los = {log.column("los_x"), log.column("los_y")};

  std::array<Span, 6> spans{};
  std::array<bool, 6> seen{};
  for (std::size_t r = 0; r < n; ++r) {
    const auto p = static_cast<std::size_t>(std::lround(log.at(r, cp)));
    if (p >= 6) continue;
    if (!seen[p]) {
      seen[p] = true;
      spans[p].first = r;
    }
    spans[p].count = r - spans[p].first + 1;
  }
  const double t_end = n > 0 ? log.at(n - 1, ct) + dt : 0.0;
  out.completed = true;
  for (std::size_t p = 0; p < 6; ++p) {
    PhaseEntry e;
    e.phase = kPhases[p];
    e.reached = seen[p];
    if (seen[p]) {
      e.start = log.at(spans[p].first, ct);
      e.end = log.at(spans[p].first + spans[p].count - 1, ct) + dt;
    }
    out.completed = out.completed && seen[p];
    out.phases.push_back(e);
  }
  for (auto& e : out.phases)
    if (e.reached && e.end > t_end) e.end = t_end;

  auto verdict = [&](const char* name, Phase ph, double thr) {
    RequirementVerdict v;
    v.name = name;
    v.phase = ph;
    v.threshold = thr;
    return v;
  };
  RequirementVerdict ape1 = verdict("APE1", Phase::SlewSteady, req.ape1);
  RequirementVerdict ape2 = verdict("APE2", Phase::CoarseSteady, req.ape2);
  RequirementVerdict rpe2 = verdict("RPE2", Phase::CoarseSteady, req.rpe2);
  RequirementVerdict ape3 = verdict("APE3", Phase::FineSteady, req.ape3);
  RequirementVerdict rpe3 = verdict("RPE3", Phase::FineSteady, req.rpe3);
  RequirementVerdict pde3 = verdict("PDE3", Phase::FineSteady, req.pde3);

  const auto idx = [](Phase p) { return static_cast<std::size_t>(phase_index(p)); };
  if (seen[idx(Phase::SlewSteady)]) {
    const Span& s = spans[idx(Phase::SlewSteady)];
    check_ape(block(log, s, att), dt, log.at(s.first, ct), req.ape1, ape1, nullptr);
  }
  if (seen[idx(Phase::CoarseSteady)]) {
    const Span& s = spans[idx(Phase::CoarseSteady)];
    const auto e = block(log, s, att);
    check_ape(e, dt, log.at(s.first, ct), req.ape2, ape2, nullptr);
    check_rpe(e, rate, log.at(s.first, ct), req.window2, req.rpe2, rpe2, nullptr);
  }

  if (!seen[idx(Phase::FineSteady)]) {
    out.note = "FineSteady never reached";
  } else {
    const Span& s = spans[idx(Phase::FineSteady)];
    const auto e = block(log, s, los);
    const double t0 = log.at(s.first, ct);
    std::vector<int> fail(s.count + 1, 0);
    check_ape(e, dt, t0, req.ape3, ape3, &fail);
    check_rpe(e, rate, t0, req.window3, req.rpe3, rpe3, &fail);
    check_pde(e, rate, t0, req.window3, req.gap3, req.pde3, pde3, &fail);
    if (!pde3.evaluated || !rpe3.evaluated) {
      out.note = "FineSteady shorter than two windows plus the gap";
    } else {
      std::size_t tail = 0;
      int acc = 0;
      std::vector<char> bad(s.count);
      for (std::size_t i = 0; i < s.count; ++i) {
        acc += fail[i];
        bad[i] = acc > 0;
      }
      while (tail < s.count && !bad[s.count - 1 - tail]) ++tail;
      out.t3_achieved = static_cast<double>(tail) * dt;
      if (tail == 0) out.note = "fine requirements violated at the end of the mission";
    }
  }
  out.verdicts = {ape1, ape2, rpe2, ape3, rpe3, pde3};
  return out;
}

}  // namespace spcm::mission
