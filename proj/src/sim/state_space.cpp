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

#include "spcm/sim/state_space.hpp"

#include <algorithm>
#include <unordered_set>

#include <fmt/format.h>

#include "spcm/error.hpp"

namespace spcm::sim {

namespace {

Labels fill_labels(Labels names, std::size_t n, const char* prefix, const char* what) {
  if (names.empty()) {
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i) names.push_back(fmt::format("{}{}", prefix, i));
    return names;
  }
  if (names.size() != n) {
    throw DimensionError(fmt::format("{} label count {} does not match dimension {}", what,
                                     names.size(), n));
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : names) {
    if (!seen.insert(name).second) {
      throw LabelError(fmt::format("duplicate {} label '{}'", what, name));
    }
  }
  return names;
}

std::optional<std::size_t> find(const Labels& labels, const std::string& name) {
  auto it = std::find(labels.begin(), labels.end(), name);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

}  // namespace

StateSpace::StateSpace(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c, Eigen::MatrixXd d,
                       Labels state_names, Labels input_names, Labels output_names)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  const auto n = a_.rows();
  if (a_.cols() != n) throw DimensionError(fmt::format("A is {}x{}, not square", n, a_.cols()));
  if (b_.rows() != n) throw DimensionError(fmt::format("B has {} rows, expected {}", b_.rows(), n));
  if (c_.cols() != n) throw DimensionError(fmt::format("C has {} cols, expected {}", c_.cols(), n));
  if (d_.rows() != c_.rows() || d_.cols() != b_.cols()) {
    throw DimensionError(fmt::format("D is {}x{}, expected {}x{}", d_.rows(), d_.cols(), c_.rows(),
                                     b_.cols()));
  }
  state_names_ = fill_labels(std::move(state_names), num_states(), "x", "state");
  input_names_ = fill_labels(std::move(input_names), num_inputs(), "u", "input");
  output_names_ = fill_labels(std::move(output_names), num_outputs(), "y", "output");
}

StateSpace StateSpace::gain(Eigen::MatrixXd d, Labels input_names, Labels output_names) {
  const auto p = d.rows();
  const auto m = d.cols();
  return StateSpace(Eigen::MatrixXd(0, 0), Eigen::MatrixXd(0, m), Eigen::MatrixXd(p, 0),
                    std::move(d), {}, std::move(input_names), std::move(output_names));
}

std::optional<std::size_t> StateSpace::input_index(const std::string& name) const {
  return find(input_names_, name);
}

std::optional<std::size_t> StateSpace::output_index(const std::string& name) const {
  return find(output_names_, name);
}

StateSpace StateSpace::select(const Labels& inputs, const Labels& outputs) const {
  Eigen::MatrixXd b(b_.rows(), static_cast<Eigen::Index>(inputs.size()));
  Eigen::MatrixXd c(static_cast<Eigen::Index>(outputs.size()), c_.cols());
  Eigen::MatrixXd d(c.rows(), b.cols());
  std::vector<std::size_t> in_idx, out_idx;
  for (const auto& name : inputs) {
    auto i = input_index(name);
    if (!i) throw LabelError(fmt::format("unknown input port '{}'", name));
    in_idx.push_back(*i);
  }
  for (const auto& name : outputs) {
    auto i = output_index(name);
    if (!i) throw LabelError(fmt::format("unknown output port '{}'", name));
    out_idx.push_back(*i);
  }
  for (std::size_t j = 0; j < in_idx.size(); ++j) {
    b.col(static_cast<Eigen::Index>(j)) = b_.col(static_cast<Eigen::Index>(in_idx[j]));
  }
  for (std::size_t i = 0; i < out_idx.size(); ++i) {
    c.row(static_cast<Eigen::Index>(i)) = c_.row(static_cast<Eigen::Index>(out_idx[i]));
    for (std::size_t j = 0; j < in_idx.size(); ++j) {
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          d_(static_cast<Eigen::Index>(out_idx[i]), static_cast<Eigen::Index>(in_idx[j]));
    }
  }
  return StateSpace(a_, std::move(b), std::move(c), std::move(d), state_names_, inputs, outputs);
}

Eigen::VectorXcd StateSpace::poles() const {
  if (a_.rows() == 0) return Eigen::VectorXcd(0);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a_, false);
  return solver.eigenvalues();
}

Eigen::MatrixXcd StateSpace::evaluate(std::complex<double> s) const {
  Eigen::MatrixXcd g = d_.cast<std::complex<double>>();
  if (a_.rows() == 0) return g;
  Eigen::MatrixXcd m = -a_.cast<std::complex<double>>();
  m.diagonal().array() += s;
  Eigen::MatrixXcd x = m.partialPivLu().solve(b_.cast<std::complex<double>>());
  g += c_.cast<std::complex<double>>() * x;
  return g;
}

StateSpace series(const StateSpace& first, const StateSpace& second) {
  if (first.num_outputs() != second.num_inputs()) {
    throw DimensionError(fmt::format("series: {} outputs feed {} inputs", first.num_outputs(),
                                     second.num_inputs()));
  }
  const auto n1 = static_cast<Eigen::Index>(first.num_states());
  const auto n2 = static_cast<Eigen::Index>(second.num_states());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
  a.topLeftCorner(n1, n1) = first.a();
  a.bottomLeftCorner(n2, n1) = second.b() * first.c();
  a.bottomRightCorner(n2, n2) = second.a();
  Eigen::MatrixXd b(n1 + n2, first.b().cols());
  b << first.b(), second.b() * first.d();
  Eigen::MatrixXd c(second.c().rows(), n1 + n2);
  c << second.d() * first.c(), second.c();
  Eigen::MatrixXd d = second.d() * first.d();
  return StateSpace(std::move(a), std::move(b), std::move(c), std::move(d));
}

StateSpace unity_feedback(const StateSpace& open_loop) {
  const auto m = static_cast<Eigen::Index>(open_loop.num_inputs());
  if (open_loop.num_outputs() != open_loop.num_inputs()) {
    throw DimensionError("unity feedback needs a square system");
  }
  // u = r - y, y = Cx + Du  =>  y = (I + D)^-1 (Cx + Dr)
  Eigen::MatrixXd i_plus_d = Eigen::MatrixXd::Identity(m, m) + open_loop.d();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(i_plus_d);
  if (!lu.isInvertible()) throw AlgebraicLoopError({"y", "u"});
  Eigen::MatrixXd inv = lu.inverse();
  Eigen::MatrixXd cy = inv * open_loop.c();
  Eigen::MatrixXd dy = inv * open_loop.d();
  Eigen::MatrixXd a = open_loop.a() - open_loop.b() * cy;
  Eigen::MatrixXd b = open_loop.b() * (Eigen::MatrixXd::Identity(m, m) - dy);
  return StateSpace(std::move(a), std::move(b), std::move(cy), std::move(dy));
}

}  // namespace spcm::sim
