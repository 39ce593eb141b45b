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

// Small typed accessors over yaml-cpp that report positions.

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <yaml-cpp/yaml.h>

#include "spcm/error.hpp"

namespace spcm::io::detail {

[[noreturn]] inline void fail(const YAML::Node& node, const std::string& source, const std::string& what) {
  const YAML::Mark m = node.Mark();
  throw ParseError(source, m.line >= 0 ? m.line + 1 : 0, m.column >= 0 ? m.column + 1 : 0, what);
}

inline YAML::Node parse_text(const std::string& text, const std::string& source) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError(source, e.mark.line + 1, e.mark.column + 1, e.msg);
  }
}

inline double as_double(const YAML::Node& node, const std::string& source, const std::string& key) {
  if (!node.IsScalar()) fail(node, source, key + ": expected a number");
  double v = 0.0;
  if (!YAML::convert<double>::decode(node, v)) fail(node, source, key + ": expected a number, got '" + node.Scalar() + "'");
  if (!std::isfinite(v)) fail(node, source, key + ": must be finite");
  return v;
}

inline long long as_int(const YAML::Node& node, const std::string& source, const std::string& key) {
  if (!node.IsScalar()) fail(node, source, key + ": expected an integer");
  long long v = 0;
  if (!YAML::convert<long long>::decode(node, v)) fail(node, source, key + ": expected an integer, got '" + node.Scalar() + "'");
  return v;
}

inline bool as_bool(const YAML::Node& node, const std::string& source, const std::string& key) {
  bool v = false;
  if (!node.IsScalar() || !YAML::convert<bool>::decode(node, v)) fail(node, source, key + ": expected true or false");
  return v;
}

inline std::string as_string(const YAML::Node& node, const std::string& source, const std::string& key) {
  if (!node.IsScalar()) fail(node, source, key + ": expected a string");
  return node.Scalar();
}

inline Eigen::VectorXd as_vector(const YAML::Node& node, const std::string& source, const std::string& key,
                                 int expected = -1) {
  if (!node.IsSequence()) fail(node, source, key + ": expected a list");
  if (expected >= 0 && static_cast<int>(node.size()) != expected)
    fail(node, source, key + ": expected " + std::to_string(expected) + " entries, got " + std::to_string(node.size()));
  Eigen::VectorXd v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = as_double(node[i], source, key + "[" + std::to_string(i) + "]");
  return v;
}

inline Eigen::MatrixXd as_matrix(const YAML::Node& node, const std::string& source, const std::string& key,
                                 int rows, int cols) {
  if (!node.IsSequence() || static_cast<int>(node.size()) != rows)
    fail(node, source, key + ": expected " + std::to_string(rows) + " rows");
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    m.row(r) = as_vector(node[static_cast<std::size_t>(r)], source, key + "[" + std::to_string(r) + "]", cols).transpose();
  return m;
}

/// Rejects keys outside `allowed` (catches typos).
inline void check_keys(const YAML::Node& map, const std::string& source, const std::string& where,
                       const std::set<std::string>& allowed) {
  if (!map.IsMap()) fail(map, source, where + ": expected a mapping");
  for (auto it = map.begin(); it != map.end(); ++it) {
    const std::string k = it->first.as<std::string>();
    if (!allowed.count(k)) fail(it->first, source, (where.empty() ? "" : where + ": ") + "unknown key '" + k + "'");
  }
}

inline const YAML::Node require(const YAML::Node& map, const std::string& source, const std::string& key,
                                const std::string& where = "") {
  const YAML::Node n = map[key];
  if (!n) fail(map, source, (where.empty() ? "" : where + ": ") + "missing required key '" + key + "'");
  return n;
}

}  // namespace spcm::io::detail
