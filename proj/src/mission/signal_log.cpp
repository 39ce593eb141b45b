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


#include "spcm/mission/signal_log.hpp"

#include <algorithm>

#include "spcm/error.hpp"

namespace spcm::mission {

SignalLog::SignalLog(std::vector<std::string> columns, double rate) : columns_(std::move(columns)), rate_(rate) {}

std::optional<std::size_t> SignalLog::find(const std::string& name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - columns_.begin());
}

std::size_t SignalLog::column(const std::string& name) const {
  const auto i = find(name);
  if (!i) throw LabelError("signal log: no column '" + name + "'");
  return *i;
}

std::vector<double> SignalLog::series(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = at(r, c);
  return out;
}

void SignalLog::append(std::span<const double> row) {
  if (row.size() != columns_.size())
    throw DimensionError("signal log: row has " + std::to_string(row.size()) + " values, expected " +
                         std::to_string(columns_.size()));
  data_.insert(data_.end(), row.begin(), row.end());
}

}  // namespace spcm::mission
