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


#include "spcm/metrics/waterfall.hpp"

#include <cmath>
#include <numbers>
#include <optional>

#include <fmt/format.h>

#include "spcm/error.hpp"
#include "spcm/sim/frequency_response.hpp"

namespace spcm::metrics {

namespace {

using cd = std::complex<double>;
using Phasor6 = Eigen::Matrix<cd, 6, 1>;

Phasor6 rotating(double force, double torque, double phase_force, double phase_torque) {
  // cos(phi + a) on x, sin(phi + a) on y.
  Phasor6 p = Phasor6::Zero();
  const cd ef = std::polar(1.0, phase_force), et = std::polar(1.0, phase_torque);
  p(0) = force * ef;
  p(1) = cd(0.0, -1.0) * force * ef;
  p(3) = torque * et;
  p(4) = cd(0.0, -1.0) * torque * et;
  return p;
}

sim::StateSpace mount_path(const structure::CoupledLinearModel& model, std::size_t wheel) {
  if (wheel >= model.layout.wheel_isolator.size())
    throw LabelError(fmt::format("no wheel {} in the assembled model", wheel));
  return model.model.select(structure::wheel_input_names(wheel), structure::wheel_mount_output_names(wheel));
}

}  // namespace

std::vector<LinePhasor> imbalance_lines(const actuators::ReactionWheel& w, double speed) {
  const double s2 = speed * speed;
  std::vector<LinePhasor> lines;
  lines.push_back({1.0, rotating(w.static_imbalance * s2, w.dynamic_imbalance * s2, 0.0, w.dynamic_phase)});
  for (const auto& h : w.harmonics)
    lines.push_back({h.order, rotating(h.force_coeff * s2, h.torque_coeff * s2, h.phase, h.phase)});
  return lines;
}

Phasor6 transmitted_line(const structure::CoupledLinearModel& model, std::size_t wheel, const LinePhasor& line,
                         double speed) {
  const sim::StateSpace path = mount_path(model, wheel);
  return path.evaluate(cd(0.0, line.order * speed)) * line.phasor;
}

WaterfallMap waterfall(const structure::SpacecraftStructure& sc, std::array<double, 2> theta,
                       const actuators::ReactionWheel& wheel, const WaterfallOptions& options) {
  if (options.speeds_hz.empty()) throw ConfigError("waterfall: empty speed grid");
  if (!(options.resolution > 0.0) || !(options.f_max > options.resolution))
    throw ConfigError("waterfall: frequency grid needs 0 < resolution < f_max");
  if (options.component < 0 || options.component > 5) throw ConfigError("waterfall: component must be 0..5");
  if (options.wheel >= sc.wheels.size()) throw LabelError(fmt::format("waterfall: no wheel {}", options.wheel));

  WaterfallMap map;
  map.speeds_hz = options.speeds_hz;
  const auto nf = static_cast<std::size_t>(std::floor(options.f_max / options.resolution)) + 1;
  for (std::size_t i = 0; i < nf; ++i) map.freqs_hz.push_back(static_cast<double>(i) * options.resolution);
  const auto ns = static_cast<Eigen::Index>(map.speeds_hz.size());
  map.source = Eigen::MatrixXd::Zero(ns, static_cast<Eigen::Index>(nf));
  map.transmitted = map.source;
  map.floor = map.source;
  const int c = options.component;

  auto build = [&](double speed) {
    structure::AssemblyOptions ao;
    if (options.gyroscopic) {
      ao.gyroscopic = true;
      ao.wheel_speeds.assign(sc.wheels.size(), 0.0);
      ao.wheel_speeds[options.wheel] = speed;
    }
    return structure::assemble(sc, theta, ao);
  };

  std::optional<structure::CoupledLinearModel> fixed;
  if (!options.gyroscopic) fixed = build(0.0);
  Eigen::VectorXd fixed_floor;

  for (Eigen::Index r = 0; r < ns; ++r) {
    const double speed = 2.0 * std::numbers::pi * map.speeds_hz[static_cast<std::size_t>(r)];
    const structure::CoupledLinearModel model = fixed ? *fixed : build(speed);
    const sim::FrequencyEvaluator eval(mount_path(model, options.wheel));

    for (const auto& line : imbalance_lines(wheel, speed)) {
      const double f = line.order * speed / (2.0 * std::numbers::pi);
      const auto bin = static_cast<std::size_t>(std::llround(f / options.resolution));
      if (bin >= nf) continue;
      const Phasor6 out = eval.at(line.order * speed) * line.phasor;
      map.source(r, static_cast<Eigen::Index>(bin)) += std::abs(line.phasor(c));
      map.transmitted(r, static_cast<Eigen::Index>(bin)) += std::abs(out(c));
    }

    if (wheel.noise_psd > 0.0) {
      if (fixed && fixed_floor.size() > 0) {
        map.floor.row(r) = fixed_floor.transpose();
        continue;
      }
      Eigen::VectorXd row = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nf));
      for (std::size_t i = 1; i < nf; ++i) {
        const Eigen::MatrixXcd g = eval.at(2.0 * std::numbers::pi * map.freqs_hz[i]);
        row(static_cast<Eigen::Index>(i)) =
            std::sqrt(wheel.noise_psd * (std::norm(g(c, 3)) + std::norm(g(c, 4))));
      }
      if (fixed) fixed_floor = row;
      map.floor.row(r) = row.transpose();
    }
  }
  return map;
}

}  // namespace spcm::metrics
