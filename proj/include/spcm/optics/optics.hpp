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

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spcm::optics {

enum class ElementKind { PoweredMirror, FlatMirror, Detector };

/// Element in the telescope frame. The local z axis is the surface normal
/// facing the incoming beam.
struct OpticalElement {
  std::string name;
  ElementKind kind = ElementKind::PoweredMirror;
  Eigen::Vector3d vertex = Eigen::Vector3d::Zero();
  Eigen::Matrix3d orientation = Eigen::Matrix3d::Identity();  // local -> telescope
  double focal_length = 0.0;                                  // m, powered mirrors
};

/// Ordered optical path M1 -> M2 -> FSM -> detector. Boresight is telescope +z;
/// starlight arrives travelling along -z.
struct Telescope {
  std::vector<OpticalElement> elements;

  void validate(std::vector<std::string>& errors) const;
  std::size_t fsm_index() const;
};

struct TelescopeGeometry {
  double m1_focal = 2.0;        // m
  double m2_focal = -0.5;       // m
  double separation = 1.6;      // M1 to M2, m
  double fsm_fraction = 0.5;    // FSM position as a fraction of the focus distance behind M1
};

/// Two-mirror Cassegrain-type layout with an FSM fold at 45 deg toward +x and
/// the detector at the nominal focus.
Telescope make_telescope(const TelescopeGeometry& g = {});

/// Effective focal length and back focal distance (from M2) of the two-mirror system.
double effective_focal_length(const TelescopeGeometry& g);
double back_focal_distance(const TelescopeGeometry& g);

/// Small rigid motion of one element: translation (m) and rotation vector
/// (rad, telescope axes, about the element vertex).
struct ElementPose {
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  Eigen::Vector3d rotation = Eigen::Vector3d::Zero();
};

struct TraceResult {
  Eigen::Vector2d spot = Eigen::Vector2d::Zero();  // detector local x, y (m)
  Eigen::Vector2d los = Eigen::Vector2d::Zero();   // rad, telescope rotation about x, y
};

/// Angle bound for perturbations, rad.
inline constexpr double kParaxialLimit = 10e-3;

/// Plate matrix: LOS = plate * spot, from the nominal trace.
Eigen::Matrix2d plate_matrix(const Telescope& t);

/// Chief ray through the (perturbed) M1 vertex. `poses` has one entry per
/// element or is empty; `fsm_tilt` rotates the FSM about its local x and y.
/// Throws ConfigError if any angle exceeds the paraxial bound.
TraceResult trace_chief_ray(const Telescope& t, const std::vector<ElementPose>& poses,
                            const Eigen::Vector2d& fsm_tilt = Eigen::Vector2d::Zero());

struct LOSSensitivity {
  Eigen::MatrixXd matrix;            // 2 x n, rad per m or rad per rad
  std::vector<std::string> labels;   // "<element>.<tx|ty|tz|rx|ry|rz>", then "<fsm>.tip", "<fsm>.tilt"

  std::size_t index(const std::string& label) const;  // LabelError if absent
};

/// Central finite differences of the trace, each column checked against a
/// half-step evaluation (Richardson consistency 1e-6 relative).
LOSSensitivity los_sensitivity(const Telescope& t);

/// S * x where `x` is labelled; every label must exist in S (LabelError otherwise).
Eigen::Vector2d los_error(const LOSSensitivity& s, const std::vector<std::string>& labels,
                          const Eigen::VectorXd& values);

}  // namespace spcm::optics
