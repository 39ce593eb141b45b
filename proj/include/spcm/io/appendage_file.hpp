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
#include <string>

#include "spcm/structure/structure.hpp"

namespace spcm::io {

/// Reads an appendage modal data file (schema spcm-appendage/1). Frequencies
/// in the file are Hz and come back in rad/s. Throws ParseError with line and
/// column for malformed input, ConfigError for physically invalid data.
structure::FlexibleAppendage load_appendage_file(const std::filesystem::path& path);

/// Same, from text; `source` names the origin in messages.
structure::FlexibleAppendage parse_appendage(const std::string& text, const std::string& source);

}  // namespace spcm::io
