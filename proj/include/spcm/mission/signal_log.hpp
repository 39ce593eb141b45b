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
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spcm::mission {

/// Uniformly sampled table of named signals (row-major).
class SignalLog {
public:
  SignalLog() = default;
  SignalLog(std::vector<std::string> columns, double rate);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  double rate() const noexcept { return rate_; }
  std::size_t rows() const noexcept { return columns_.empty() ? 0 : data_.size() / columns_.size(); }
  std::size_t width() const noexcept { return columns_.size(); }

  /// Column index; LabelError if absent.
  std::size_t column(const std::string& name) const;
  std::optional<std::size_t> find(const std::string& name) const;

  double at(std::size_t row, std::size_t col) const { return data_[row * columns_.size() + col]; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * columns_.size(), columns_.size()};
  }
  std::vector<double> series(const std::string& name) const;

  /// DimensionError on a wrong row width.
  void append(std::span<const double> row);
  void reserve(std::size_t rows) { data_.reserve(rows * columns_.size()); }

private:
  std::vector<std::string> columns_;
  double rate_ = 0.0;
  std::vector<double> data_;
};

}  // namespace spcm::mission
