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


#include "spcm/metrics/pointing.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "spcm/error.hpp"

namespace spcm::metrics {

namespace {

// Samples relative to the first one: a constant record then sums to exact zeros.
Eigen::MatrixXd centred(const Eigen::MatrixXd& x) { return x.rowwise() - x.row(0); }

// Prefix sums, row k holds the sum of samples [0, k).
Eigen::MatrixXd prefix(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(x.rows() + 1, x.cols());
  for (Eigen::Index k = 0; k < x.rows(); ++k) p.row(k + 1) = p.row(k) + x.row(k);
  return p;
}

void summarize(MetricSeries& m, double pct) {
  m.summary = percentile(m.norm, pct);
  m.axis_summary.resize(m.axes.cols());
  for (Eigen::Index a = 0; a < m.axes.cols(); ++a) m.axis_summary(a) = percentile(m.axes.col(a), pct);
}

}  // namespace

void PointingRecord::validate() const {
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) throw ConfigError("pointing record: sample rate must be positive");
  if (samples.rows() == 0 || samples.cols() == 0) throw ConfigError("pointing record is empty");
  if (!samples.allFinite()) throw ConfigError("pointing record contains non-finite samples");
}

std::size_t window_samples(double window, double dt) {
  if (!(window > 0.0) || !std::isfinite(window)) throw ConfigError("window length must be positive");
  return static_cast<std::size_t>(std::llround(window / dt)) + 1;
}

double percentile(const Eigen::VectorXd& values, double p) {
  if (values.size() == 0) throw ConfigError("percentile of an empty series");
  if (!(p > 0.0 && p <= 100.0)) throw ConfigError(fmt::format("percentile {} outside (0, 100]", p));
  if (p == 100.0) return values.maxCoeff();
  std::vector<double> v(values.data(), values.data() + values.size());
  const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(v.size())));
  const std::size_t k = std::max<std::size_t>(rank, 1) - 1;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
  return v[k];
}

MetricSeries ape(const PointingRecord& record, double pct) {
  record.validate();
  MetricSeries m;
  m.axes = record.samples.cwiseAbs();
  m.norm = record.samples.rowwise().norm();
  summarize(m, pct);
  return m;
}

MetricSeries rpe(const PointingRecord& record, double window, double pct) {
  record.validate();
  const std::size_t n = window_samples(window, record.dt());
  if (n < 2) throw ConfigError("RPE window must cover at least two samples");
  if (n > record.size()) throw ConfigError(fmt::format("RPE window of {} s is longer than the record", window));
  const Eigen::MatrixXd x = centred(record.samples);
  const Eigen::MatrixXd p = prefix(x);
  const std::size_t count = record.size() - n + 1;
  const auto ni = static_cast<Eigen::Index>(n);
  MetricSeries m;
  m.norm.resize(static_cast<Eigen::Index>(count));
  m.axes.resize(static_cast<Eigen::Index>(count), x.cols());
  for (std::size_t s = 0; s < count; ++s) {
    const auto si = static_cast<Eigen::Index>(s);
    const Eigen::RowVectorXd mean = (p.row(si + ni) - p.row(si)) / static_cast<double>(n);
    const auto dev = x.middleRows(si, ni).rowwise() - mean;
    m.norm(si) = dev.rowwise().norm().maxCoeff();
    m.axes.row(si) = dev.cwiseAbs().colwise().maxCoeff();
  }
  summarize(m, pct);
  return m;
}

MetricSeries pde(const PointingRecord& record, double window, double gap, double pct) {
  record.validate();
  if (!(gap >= 0.0) || !std::isfinite(gap)) throw ConfigError("PDE gap must be non-negative");
  const std::size_t n = window_samples(window, record.dt());
  if (n < 2) throw ConfigError("PDE window must span at least one sample interval");
  const auto offset = static_cast<std::size_t>(std::llround((window + gap) / record.dt()));
  if (offset + n > record.size())
    throw ConfigError(fmt::format("record of {} samples is too short for PDE window {} s and gap {} s", record.size(),
                                  window, gap));
  const Eigen::MatrixXd p = prefix(centred(record.samples));
  const std::size_t count = record.size() - offset - n + 1;
  const auto ni = static_cast<Eigen::Index>(n);
  const auto oi = static_cast<Eigen::Index>(offset);
  MetricSeries m;
  m.norm.resize(static_cast<Eigen::Index>(count));
  m.axes.resize(static_cast<Eigen::Index>(count), record.samples.cols());
  for (std::size_t s = 0; s < count; ++s) {
    const auto si = static_cast<Eigen::Index>(s);
    const Eigen::RowVectorXd a = p.row(si + ni) - p.row(si);
    const Eigen::RowVectorXd b = p.row(si + oi + ni) - p.row(si + oi);
    const Eigen::RowVectorXd d = (b - a) / static_cast<double>(n);
    m.norm(si) = d.norm();
    m.axes.row(si) = d.cwiseAbs();
  }
  summarize(m, pct);
  return m;
}

}  // namespace spcm::metrics
