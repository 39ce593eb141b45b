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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spcm/io/scenario_file.hpp"
#include "spcm/metrics/campaign.hpp"
#include "spcm/metrics/waterfall.hpp"
#include "spcm/mission/signal_log.hpp"
#include "spcm/mission/simulator.hpp"
#include "spcm/structure/structure.hpp"

namespace spcm::io {

inline constexpr const char* kTimeseriesFile = "timeseries.csv";
inline constexpr const char* kEventsFile = "events.csv";
inline constexpr const char* kReportFile = "report.json";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kScenarioCopy = "scenario.yaml";

struct RunArtifacts {
  std::filesystem::path dir;
  std::filesystem::path timeseries, events, report, manifest, scenario;
  mission::SimulationResult result;
};

/// Creates `dir` if needed and proves it writable with a probe file.
/// Throws IoError otherwise.
void ensure_writable_dir(const std::filesystem::path& dir);

/// Validates, checks `out_dir`, simulates and writes the time series, events,
/// report, manifest and a copy of the scenario and its data files. I/O
/// problems raise IoError before the simulation starts where possible.
RunArtifacts run(const LoadedScenario& scenario, const std::filesystem::path& out_dir,
                 const mission::SimulationOptions& options = {});

/// Header row then one row per sample, values printed with kLogDigits
/// significant digits.
std::string timeseries_csv(const mission::SignalLog& log);
std::string events_csv(const std::vector<mission::Event>& events);
std::string report_json(const mission::Scenario& scenario, const mission::SimulationResult& result,
                        const std::string& config_hash);

/// Reads a time series written by timeseries_csv (or any numeric CSV with a
/// header whose first column is uniformly sampled time). ParseError with line
/// and column on malformed content.
mission::SignalLog read_timeseries_csv(const std::filesystem::path& path);
mission::SignalLog parse_timeseries_csv(const std::string& text, const std::string& source);

struct ArchivedRun {
  std::filesystem::path dir;
  LoadedScenario scenario;           // from the archived copy
  std::string config_hash;           // recorded in the manifest
  std::uint64_t seed = 0;
  std::optional<double> duration;
};

/// Reads the manifest and archived scenario. Throws IoError for missing
/// files, ConfigError when the scenario no longer matches the recorded hash.
ArchivedRun open_run(const std::filesystem::path& run_dir);

/// Rescores the archived time series against the archived timeline.
mission::MissionScore rescore(const ArchivedRun& run);

/// Simulates the archived scenario again and compares the time series bytes.
bool replay_matches(const ArchivedRun& run);

/// State-space matrices and port names as JSON.
std::string linearization_json(const structure::CoupledLinearModel& model);

/// Speed rows by frequency columns; first column the speed in Hz.
std::string waterfall_csv(const metrics::WaterfallMap& map, const Eigen::MatrixXd& values);

/// Writes text atomically enough for artifacts (temp file then rename). IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Campaign outputs: runs.csv and summary.json.
void write_campaign(const metrics::CampaignResult& result, const std::filesystem::path& dir,
                    const std::string& config_hash);

}  // namespace spcm::io
