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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "spcm/mission/scenario.hpp"

namespace spcm::io {

/// Scenario plus what is needed to archive and replay it.
struct LoadedScenario {
  mission::Scenario scenario;
  std::filesystem::path path;
  std::string text;  // scenario file as read
  struct DataFile {
    std::string reference;               // as written in the scenario
    std::filesystem::path resolved;
    std::string text;
  };
  std::vector<DataFile> data_files;

  /// FNV-1a 64 over the scenario text and every referenced data file.
  std::uint64_t config_hash() const;
};

/// Reads and fully validates a scenario (schema spcm-scenario/1). Throws
/// ParseError for malformed YAML and ConfigError listing every problem found
/// (unknown keys, wrong types, failed invariants), each with its config path.
LoadedScenario load_scenario_file(const std::filesystem::path& path);
mission::Scenario load_scenario(const std::filesystem::path& path);

/// Same from text; appendage files are resolved against `base_dir`.
LoadedScenario parse_scenario(const std::string& text, const std::string& source,
                              const std::filesystem::path& base_dir);

std::string hash_hex(std::uint64_t h);

/// FNV-1a 64 of a byte string (a change detector, not a cryptographic hash).
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace spcm::io
