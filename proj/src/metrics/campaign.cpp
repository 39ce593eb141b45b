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


#include "spcm/metrics/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "spcm/error.hpp"
#include "spcm/metrics/pointing.hpp"
#include "spcm/sim/random.hpp"

namespace spcm::metrics {

namespace {

double draw(const UncertainParameter& p, sim::Rng& rng) {
  if (p.law == SamplingLaw::Uniform) return rng.uniform(p.min, p.max);
  const double sigma = (p.max - p.min) / 6.0;
  for (;;) {
    const double v = rng.normal(p.nominal, sigma);
    if (v >= p.min && v <= p.max) return v;
  }
}

std::string shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

mission::Scenario sample_scenario(const mission::Scenario& base, const std::vector<UncertainParameter>& params,
                                  std::uint64_t master_seed, std::size_t index, std::vector<double>* values,
                                  std::uint64_t* seed) {
  sim::Rng rng(sim::derive_seed(master_seed, 2 * static_cast<std::uint64_t>(index)));
  mission::Scenario s = base;
  s.seed = sim::derive_seed(master_seed, 2 * static_cast<std::uint64_t>(index) + 1);
  if (values) values->clear();
  for (const auto& p : params) {
    const double v = draw(p, rng);
    mission::apply_parameter(s, p.path, v);
    if (values) values->push_back(v);
  }
  if (seed) *seed = s.seed;
  return s;
}

CampaignSummary summarize(const std::vector<RunRecord>& runs) {
  CampaignSummary s;
  s.runs = runs.size();
  if (runs.empty()) return s;
  Eigen::VectorXd scores(static_cast<Eigen::Index>(runs.size()));
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    scores(static_cast<Eigen::Index>(i)) = r.score;
    s.completed += r.completed ? 1 : 0;
    s.diverged += r.diverged ? 1 : 0;
    s.failed += (!r.diverged && !r.failure.empty()) ? 1 : 0;
    if (r.score < runs[s.worst].score) s.worst = i;
  }
  s.mean = scores.mean();
  s.min = scores.minCoeff();
  s.max = scores.maxCoeff();
  s.stddev = runs.size() > 1
                 ? std::sqrt((scores.array() - s.mean).square().sum() / static_cast<double>(runs.size() - 1))
                 : 0.0;
  s.p05 = percentile(scores, 5.0);
  return s;
}

CampaignResult monte_carlo(const mission::Scenario& base, const std::vector<UncertainParameter>& params,
                           std::size_t runs, std::uint64_t master_seed, std::size_t threads,
                           const mission::SimulationOptions& options, const CampaignProgress& progress) {
  std::vector<std::string> errors;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const std::string where = fmt::format("uncertain[{}]", i);
    params[i].validate(where, errors);
    if (!mission::is_parameter_path(base, params[i].path))
      errors.push_back(where + ".path: unknown parameter '" + params[i].path + "'");
  }
  if (runs == 0) errors.push_back("campaign: at least one run is required");
  if (!errors.empty()) throw ConfigError(errors);
  base.validate();

  CampaignResult result;
  result.master_seed = master_seed;
  for (const auto& p : params) result.parameters.push_back(p.path);
  result.runs.resize(runs);

  auto run_one = [&](std::size_t i) {
    RunRecord& r = result.runs[i];
    r.index = i;
    try {
      const auto s = sample_scenario(base, params, master_seed, i, &r.values, &r.seed);
      const auto sim = mission::simulate(s, options);
      r.score = sim.score.t3_achieved;
      r.fraction = sim.score.fraction();
      r.completed = sim.score.completed;
      r.diverged = sim.diverged;
      r.failure = sim.failure;
    } catch (const ConfigError& e) {
      r.score = 0.0;
      r.fraction = 0.0;
      r.failure = e.what();
    }
    if (progress) progress(r);
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, runs);
  if (threads <= 1) {
    for (std::size_t i = 0; i < runs; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> stop{false};
    std::mutex error_lock;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < runs && !stop; i = next++) {
          try {
            run_one(i);
          } catch (...) {
            std::lock_guard<std::mutex> g(error_lock);
            if (!first_error) first_error = std::current_exception();
            stop = true;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  result.summary = summarize(result.runs);
  return result;
}

std::string campaign_csv(const CampaignResult& result) {
  std::string out = "index,seed";
  for (const auto& p : result.parameters) out += "," + csv_field(p);
  out += ",score,fraction,completed,diverged,failure\n";
  for (const auto& r : result.runs) {
    out += fmt::format("{},{}", r.index, r.seed);
    for (double v : r.values) out += "," + shortest(v);
    out += fmt::format(",{},{},{},{},{}\n", shortest(r.score), shortest(r.fraction), r.completed ? 1 : 0,
                       r.diverged ? 1 : 0, csv_field(r.failure));
  }
  return out;
}

}  // namespace spcm::metrics
