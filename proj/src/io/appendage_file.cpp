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

#include "spcm/io/appendage_file.hpp"

#include <fstream>
#include <numbers>
#include <sstream>

#include "yaml_util.hpp"

namespace spcm::io {

using namespace detail;

structure::FlexibleAppendage parse_appendage(const std::string& text, const std::string& source) {
  const YAML::Node root = parse_text(text, source);
  if (!root.IsMap()) fail(root, source, "expected a mapping at top level");
  check_keys(root, source, "", {"schema", "name", "units", "mass_matrix", "modes"});
  const YAML::Node schema = require(root, source, "schema");
  if (as_string(schema, source, "schema") != "spcm-appendage/1")
    fail(schema, source, "unsupported schema '" + schema.Scalar() + "'");
  if (const YAML::Node units = root["units"]) {
    check_keys(units, source, "units", {"length", "mass", "frequency"});
    const auto expect = [&](const char* key, const char* value) {
      if (const YAML::Node u = units[key]; u && as_string(u, source, key) != value)
        fail(u, source, std::string("units.") + key + ": only " + value + " is supported");
    };
    expect("length", "m");
    expect("mass", "kg");
    expect("frequency", "Hz");
  }

  structure::FlexibleAppendage a;
  a.name = as_string(require(root, source, "name"), source, "name");
  a.rigid_mass = as_matrix(require(root, source, "mass_matrix"), source, "mass_matrix", 6, 6);

  const YAML::Node modes = require(root, source, "modes");
  if (!modes.IsSequence()) fail(modes, source, "modes: expected a list");
  const auto n = static_cast<Eigen::Index>(modes.size());
  a.frequencies.resize(n);
  a.damping.resize(n);
  a.participation.resize(6, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const YAML::Node m = modes[static_cast<std::size_t>(i)];
    const std::string where = "modes[" + std::to_string(i) + "]";
    check_keys(m, source, where, {"frequency", "damping", "participation"});
    a.frequencies(i) = 2.0 * std::numbers::pi * as_double(require(m, source, "frequency", where), source, where + ".frequency");
    a.damping(i) = as_double(require(m, source, "damping", where), source, where + ".damping");
    a.participation.col(i) = as_vector(require(m, source, "participation", where), source, where + ".participation", 6);
  }

  std::vector<std::string> errors;
  a.validate(source, errors);
  if (!errors.empty()) throw ConfigError(errors);
  return a;
}

structure::FlexibleAppendage load_appendage_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read appendage file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_appendage(ss.str(), path.string());
}

}  // namespace spcm::io
