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

#include <stdexcept>
#include <string>
#include <vector>

namespace spcm {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration. Carries every problem found, not just the first.
class ConfigError : public Error {
public:
  explicit ConfigError(std::string message)
      : Error(message), messages_{std::move(message)} {}
  explicit ConfigError(std::vector<std::string> messages)
      : Error(join(messages)), messages_(std::move(messages)) {}

  const std::vector<std::string>& messages() const noexcept { return messages_; }

private:
  static std::string join(const std::vector<std::string>& messages) {
    std::string out;
    for (const auto& m : messages) {
      if (!out.empty()) out += '\n';
      out += m;
    }
    return out;
  }

  std::vector<std::string> messages_;
};

/// Parse failure in a structured text file; line/column are 1-based.
class ParseError : public ConfigError {
public:
  ParseError(const std::string& file, int line, int column, const std::string& what)
      : ConfigError(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  int line_;
  int column_;
};

/// Mismatched matrix/vector dimensions or port lists.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// A port or DoF label that does not resolve.
class LabelError : public Error {
public:
  using Error::Error;
};

/// Direct-feedthrough cycle in a block interconnection.
class AlgebraicLoopError : public Error {
public:
  explicit AlgebraicLoopError(std::vector<std::string> loop)
      : Error(describe(loop)), loop_(std::move(loop)) {}

  const std::vector<std::string>& loop() const noexcept { return loop_; }

private:
  static std::string describe(const std::vector<std::string>& loop) {
    std::string out = "algebraic loop: ";
    for (std::size_t i = 0; i < loop.size(); ++i) {
      if (i != 0) out += " -> ";
      out += loop[i];
    }
    return out;
  }

  std::vector<std::string> loop_;
};

/// Non-finite state encountered during integration.
class DivergedSimulation : public Error {
public:
  explicit DivergedSimulation(double time)
      : Error("simulation diverged at t=" + std::to_string(time) + " s"), time_(time) {}

  double time() const noexcept { return time_; }

private:
  double time_;
};

/// Input/output failure (unwritable directory, missing file, ...).
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace spcm
