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

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spcm::sim {

using Labels = std::vector<std::string>;

/// Continuous-time LTI system x' = Ax + Bu, y = Cx + Du with named ports.
class StateSpace {
public:
  StateSpace() = default;

  /// Throws DimensionError on inconsistent shapes and LabelError on
  /// duplicate labels. Empty label lists are filled with x0.., u0.., y0...
  StateSpace(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c, Eigen::MatrixXd d,
             Labels state_names = {}, Labels input_names = {}, Labels output_names = {});

  /// Pure gain y = Du.
  static StateSpace gain(Eigen::MatrixXd d, Labels input_names = {}, Labels output_names = {});

  const Eigen::MatrixXd& a() const noexcept { return a_; }
  const Eigen::MatrixXd& b() const noexcept { return b_; }
  const Eigen::MatrixXd& c() const noexcept { return c_; }
  const Eigen::MatrixXd& d() const noexcept { return d_; }

  std::size_t num_states() const noexcept { return static_cast<std::size_t>(a_.rows()); }
  std::size_t num_inputs() const noexcept { return static_cast<std::size_t>(b_.cols()); }
  std::size_t num_outputs() const noexcept { return static_cast<std::size_t>(c_.rows()); }

  const Labels& state_names() const noexcept { return state_names_; }
  const Labels& input_names() const noexcept { return input_names_; }
  const Labels& output_names() const noexcept { return output_names_; }

  std::optional<std::size_t> input_index(const std::string& name) const;
  std::optional<std::size_t> output_index(const std::string& name) const;

  /// Sub-system keeping the named inputs and outputs (all states kept).
  /// Throws LabelError for an unknown name.
  StateSpace select(const Labels& inputs, const Labels& outputs) const;

  /// Eigenvalues of A.
  Eigen::VectorXcd poles() const;

  /// G(s) = C (sI - A)^-1 B + D at a single complex frequency.
  Eigen::MatrixXcd evaluate(std::complex<double> s) const;

private:
  Eigen::MatrixXd a_, b_, c_, d_;
  Labels state_names_, input_names_, output_names_;
};

/// Series connection: output of `first` feeds input of `second` (port counts
/// must agree). Result transfer is second * first.
StateSpace series(const StateSpace& first, const StateSpace& second);

/// Negative unity feedback around a square system: u = r - y.
StateSpace unity_feedback(const StateSpace& open_loop);

}  // namespace spcm::sim
