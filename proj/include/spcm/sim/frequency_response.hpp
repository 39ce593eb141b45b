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

#include <span>
#include <vector>

#include "spcm/sim/state_space.hpp"

namespace spcm::sim {

struct FrequencySample {
  double omega = 0.0;               // rad/s
  Eigen::MatrixXcd response;        // p x m
  Eigen::VectorXd singular_values;  // descending
  bool singular = false;            // jw I - A numerically singular; response is NaN
};

/// G(jw) = C (jwI - A)^-1 B + D on the grid. A sample at an undamped pole is
/// flagged rather than thrown. Throws ConfigError on a non-positive or
/// non-finite grid point.
std::vector<FrequencySample> freq_response(const StateSpace& sys, std::span<const double> omega);

/// Repeated evaluation of G(s) after a one-off Hessenberg reduction of A;
/// each call costs O(n^2) per input instead of a dense factorization.
class FrequencyEvaluator {
public:
  explicit FrequencyEvaluator(const StateSpace& sys);
  /// NaN entries when sI - A is numerically singular.
  Eigen::MatrixXcd operator()(std::complex<double> s) const;
  Eigen::MatrixXcd at(double omega) const { return (*this)({0.0, omega}); }

private:
  Eigen::MatrixXd h_, qtb_, cq_, d_;
};

/// n log-spaced points in [lo, hi].
std::vector<double> logspace(double lo, double hi, std::size_t n);

/// n uniformly spaced points in [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace spcm::sim
