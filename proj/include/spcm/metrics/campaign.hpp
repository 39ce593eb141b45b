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
#include <functional>
#include <string>
#include <vector>

#include "spcm/metrics/uncertainty.hpp"
#include "spcm/mission/scenario.hpp"
#include "spcm/mission/simulator.hpp"

namespace spcm::metrics {

struct RunRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;       // scenario seed used for the run
  std::vector<double> values;   // sampled parameters, campaign order
  double score = 0.0;           // achieved fine-pointing time, s
  double fraction = 0.0;        // score over the planned time, capped at 1
  bool completed = false;       // every phase reached
  bool diverged = false;
  std::string failure;          // divergence or configuration problem, empty if none
};

struct CampaignSummary {
  std::size_t runs = 0;
  std::size_t completed = 0;
  std::size_t diverged = 0;
  std::size_t failed = 0;       // rejected scenarios
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
  double p05 = 0.0;             // 5th percentile of the score
  std::size_t worst = 0;        // index of the lowest score, lowest index on ties
};

struct CampaignResult {
  std::vector<std::string> parameters;
  std::vector<RunRecord> runs;  // ordered by index
  CampaignSummary summary;
  std::uint64_t master_seed = 0;

  const RunRecord& worst() const { return runs.at(summary.worst); }
};

/// Run i draws its parameters from derive_seed(master, 2 i) and simulates with
/// seed derive_seed(master, 2 i + 1), so results do not depend on the thread
/// count or scheduling.
mission::Scenario sample_scenario(const mission::Scenario& base, const std::vector<UncertainParameter>& params,
                                  std::uint64_t master_seed, std::size_t index, std::vector<double>* values = nullptr,
                                  std::uint64_t* seed = nullptr);

/// Called after each run completes, from the worker that ran it.
using CampaignProgress = std::function<void(const RunRecord&)>;

/// `threads` = 0 uses the hardware concurrency. Diverged or rejected runs score
/// 0 and the campaign carries on. Throws ConfigError for invalid parameters
/// or paths.
CampaignResult monte_carlo(const mission::Scenario& base, const std::vector<UncertainParameter>& params,
                           std::size_t runs, std::uint64_t master_seed, std::size_t threads,
                           const mission::SimulationOptions& options = {}, const CampaignProgress& progress = {});

CampaignSummary summarize(const std::vector<RunRecord>& runs);

/// One row per run: index, seed, parameters, score, fraction, completed, diverged, failure.
std::string campaign_csv(const CampaignResult& result);

}  // namespace spcm::metrics
