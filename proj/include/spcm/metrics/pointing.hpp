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

#include <Eigen/Dense>

namespace spcm::metrics {

/// Uniformly sampled pointing error; one row per sample, one column per axis (rad).
struct PointingRecord {
  double sample_rate = 0.0;  // Hz
  Eigen::MatrixXd samples;

  double dt() const noexcept { return 1.0 / sample_rate; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(samples.rows()); }
  /// Throws ConfigError on an empty record, bad rate or non-finite value.
  void validate() const;
};

/// Per-sample (APE) or per-window (RPE, PDE) values. `norm` uses the vector
/// magnitude across axes; `axes` holds the same statistic per axis.
struct MetricSeries {
  Eigen::VectorXd norm;
  Eigen::MatrixXd axes;
  double summary = 0.0;          // of `norm`, at the requested percentile
  Eigen::VectorXd axis_summary;  // per axis
};

/// Samples per window: round(window / dt) + 1, so the window spans exactly `window` seconds.
std::size_t window_samples(double window, double dt);

/// Nearest-rank percentile, p in (0, 100]; 100 is the maximum.
double percentile(const Eigen::VectorXd& values, double p);

/// |e(t)|.
MetricSeries ape(const PointingRecord& record, double pct = 100.0);

/// For every window start (stride one sample): max over the window of
/// |e - mean_window(e)|.
MetricSeries rpe(const PointingRecord& record, double window, double pct = 100.0);

/// For every pair of windows whose starts are window + gap apart:
/// |mean_w1(e) - mean_w2(e)|.
MetricSeries pde(const PointingRecord& record, double window, double gap, double pct = 100.0);

}  // namespace spcm::metrics
