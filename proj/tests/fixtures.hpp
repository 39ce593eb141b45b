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

#include <cmath>
#include <filesystem>
#include <numbers>

#include "spcm/io/appendage_file.hpp"
#include "spcm/structure/structure.hpp"

namespace spcm::test {

inline std::filesystem::path data_dir() { return SPCM_DATA_DIR; }

inline structure::Matrix6 diag6(double a, double b, double c, double d, double e, double f) {
  structure::Matrix6 m = structure::Matrix6::Zero();
  m.diagonal() << a, b, c, d, e, f;
  return m;
}

/// Hub, two arrays on drives, a boom, isolated payload, slosh and four
/// isolated wheels in a pyramid. Built directly, independent of the scenario
/// loader.
inline structure::SpacecraftStructure full_structure() {
  using namespace structure;
  SpacecraftStructure sc;
  sc.hub.mass = 1500.0;
  sc.hub.inertia = Eigen::Vector3d(1200.0, 1100.0, 900.0).asDiagonal();
  sc.hub.com = Eigen::Vector3d(0.0, 0.0, 0.05);

  const auto array = io::load_appendage_file(data_dir() / "solar_array.yaml");
  for (int side = 0; side < 2; ++side) {
    AppendageMount m;
    m.appendage = array;
    m.appendage.name = side == 0 ? "array_1" : "array_2";
    m.position = Eigen::Vector3d(0.0, side == 0 ? 1.1 : -1.1, 0.0);
    m.orientation = Eigen::AngleAxisd(side == 0 ? 0.0 : std::numbers::pi, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    SadmJoint j;
    j.axis = Eigen::Vector3d::UnitY();
    j.drive = static_cast<std::size_t>(side);
    j.stiffness = 1.2e4;
    j.damping = 20.0;
    m.sadm = j;
    sc.appendages.push_back(m);
  }
  AppendageMount boom;
  boom.appendage = io::load_appendage_file(data_dir() / "hga_boom.yaml");
  boom.position = Eigen::Vector3d(-1.0, 0.0, -0.8);
  boom.orientation = Eigen::AngleAxisd(std::numbers::pi / 2.0, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  sc.appendages.push_back(boom);

  PayloadMount p;
  p.body = io::load_appendage_file(data_dir() / "payload.yaml");
  p.isolator.node = Eigen::Vector3d(0.0, 0.0, 1.0);
  p.isolator.stiffness = diag6(3.5e5, 3.5e5, 5.0e5, 4.0e5, 4.0e5, 2.0e5);
  p.isolator.damping = diag6(900.0, 900.0, 1100.0, 700.0, 700.0, 350.0);
  sc.payload = p;

  SloshModel s;
  s.mass = 80.0;
  s.fluid_mass = 200.0;
  s.frequency = 2.0 * std::numbers::pi * 0.9;
  s.damping = 0.01;
  s.node = Eigen::Vector3d(0.0, 0.0, -0.3);
  sc.slosh = s;

  const double beta = std::numbers::pi / 4.0;
  for (int k = 0; k < 4; ++k) {
    const double az = std::numbers::pi / 4.0 + k * std::numbers::pi / 2.0;
    const Eigen::Vector3d axis(std::cos(beta) * std::cos(az), std::cos(beta) * std::sin(az), std::sin(beta));
    WheelMount w;
    w.position = Eigen::Vector3d(0.6 * std::cos(az) * std::sqrt(2.0), 0.6 * std::sin(az) * std::sqrt(2.0), -0.8);
    w.orientation = frame_from_axis(axis);
    w.mass = 6.0;
    w.inertia = Eigen::Vector3d(0.05, 0.05, 0.02);
    w.rotor_inertia = 0.08;
    w.isolator_stiffness = diag6(4.6e4, 4.6e4, 9.5e4, 640.0, 640.0, 114.0);
    w.isolator_damping = diag6(50.0, 50.0, 75.0, 0.55, 0.55, 0.15);
    sc.wheels.push_back(w);
  }
  return sc;
}

}  // namespace spcm::test
