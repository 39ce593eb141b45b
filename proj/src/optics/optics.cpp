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

#include "spcm/optics/optics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "spcm/error.hpp"
#include "spcm/sim/quaternion.hpp"

namespace spcm::optics {

namespace {

const char* const kDof[6] = {"tx", "ty", "tz", "rx", "ry", "rz"};

Eigen::Matrix3d rot(const Eigen::Vector3d& r) { return sim::quat_exp(r).toRotationMatrix(); }

struct Ray {
  Eigen::Vector3d origin;
  Eigen::Vector3d dir;
};

// Paraxial trace with incoming direction `incoming` (unit, telescope frame).
Eigen::Vector2d trace_spot(const Telescope& t, const std::vector<ElementPose>& poses,
                           const Eigen::Vector2d& fsm_tilt, const Eigen::Vector3d& incoming) {
  const std::size_t n = t.elements.size();
  const std::size_t fsm = t.fsm_index();
  Ray ray;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = t.elements[i];
    Eigen::Vector3d p = e.vertex;
    Eigen::Matrix3d r = e.orientation;
    if (!poses.empty()) {
      p += poses[i].translation;
      r = rot(poses[i].rotation) * r;
    }
    if (i == fsm) r = r * rot(Eigen::Vector3d(fsm_tilt(0), fsm_tilt(1), 0.0));
    const Eigen::Vector3d normal = r.col(2);

    if (i == 0) {
      // Chief ray through the centroid of the stop (M1 vertex).
      ray.origin = p;
      ray.dir = incoming;
    } else {
      const double denom = ray.dir.dot(normal);
      if (std::abs(denom) < 1e-12) throw Error("chief ray misses " + e.name);
      const double s = (p - ray.origin).dot(normal) / denom;
      ray.origin += s * ray.dir;
    }
    const Eigen::Vector3d local = r.transpose() * (ray.origin - p);
    if (e.kind == ElementKind::Detector) return local.head<2>();

    Eigen::Vector3d d = ray.dir - 2.0 * ray.dir.dot(normal) * normal;
    if (e.kind == ElementKind::PoweredMirror) {
      Eigen::Vector3d dl = r.transpose() * d;
      const double u = dl.x() / dl.z() - local.x() / e.focal_length;
      const double v = dl.y() / dl.z() - local.y() / e.focal_length;
      dl = Eigen::Vector3d(u, v, 1.0).normalized() * (dl.z() > 0.0 ? 1.0 : -1.0);
      d = r * dl;
    }
    ray.dir = d.normalized();
  }
  throw Error("optical path has no detector");
}

Eigen::Vector3d nominal_incoming() { return -Eigen::Vector3d::UnitZ(); }

void check_bounds(const std::vector<ElementPose>& poses, const Eigen::Vector2d& fsm_tilt) {
  for (std::size_t i = 0; i < poses.size(); ++i) {
    if (!poses[i].translation.allFinite() || !poses[i].rotation.allFinite())
      throw ConfigError(fmt::format("element {} perturbation is not finite", i));
    if (poses[i].rotation.cwiseAbs().maxCoeff() >= kParaxialLimit)
      throw ConfigError(fmt::format("element {} rotation exceeds the paraxial bound of {} rad", i, kParaxialLimit));
  }
  if (!fsm_tilt.allFinite() || fsm_tilt.cwiseAbs().maxCoeff() >= kParaxialLimit)
    throw ConfigError(fmt::format("FSM tilt exceeds the paraxial bound of {} rad", kParaxialLimit));
}

}  // namespace

void Telescope::validate(std::vector<std::string>& errors) const {
  if (elements.size() != 4) {
    errors.push_back("optics: expected the path M1, M2, FSM, detector");
    return;
  }
  const ElementKind order[4] = {ElementKind::PoweredMirror, ElementKind::PoweredMirror, ElementKind::FlatMirror,
                                ElementKind::Detector};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& e = elements[i];
    if (e.kind != order[i]) errors.push_back(fmt::format("optics.{}: wrong element kind for position {}", e.name, i));
    if (e.kind == ElementKind::PoweredMirror && !(std::abs(e.focal_length) > 0.0))
      errors.push_back(fmt::format("optics.{}: focal length must be nonzero", e.name));
    const Eigen::Matrix3d& r = e.orientation;
    if ((r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-9 ||
        std::abs(r.determinant() - 1.0) > 1e-9)
      errors.push_back(fmt::format("optics.{}: orientation is not a rotation", e.name));
  }
}

std::size_t Telescope::fsm_index() const {
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i].kind == ElementKind::FlatMirror) return i;
  return elements.size();
}

double effective_focal_length(const TelescopeGeometry& g) {
  return 1.0 / (1.0 / g.m1_focal + 1.0 / g.m2_focal - g.separation / (g.m1_focal * g.m2_focal));
}

double back_focal_distance(const TelescopeGeometry& g) {
  return effective_focal_length(g) * (1.0 - g.separation / g.m1_focal);
}

Telescope make_telescope(const TelescopeGeometry& g) {
  Telescope t;
  OpticalElement m1{"M1", ElementKind::PoweredMirror, Eigen::Vector3d::Zero(), Eigen::Matrix3d::Identity(),
                    g.m1_focal};
  // M2 faces M1: local z = -z, local y kept, local x = -x.
  Eigen::Matrix3d r2;
  r2 << -1, 0, 0, 0, 1, 0, 0, 0, -1;
  OpticalElement m2{"M2", ElementKind::PoweredMirror, Eigen::Vector3d(0, 0, g.separation), r2, g.m2_focal};

  const double bfd = back_focal_distance(g);
  const double behind_m1 = bfd - g.separation;  // focus distance behind the M1 vertex
  const double z_fsm = -g.fsm_fraction * behind_m1;
  const double arm = behind_m1 - g.fsm_fraction * behind_m1;  // FSM to focus
  Eigen::Matrix3d rf;
  const double s = 1.0 / std::sqrt(2.0);
  rf.col(0) = Eigen::Vector3d(s, 0, -s);
  rf.col(1) = Eigen::Vector3d(0, 1, 0);
  rf.col(2) = Eigen::Vector3d(s, 0, s);
  OpticalElement fsm{"FSM", ElementKind::FlatMirror, Eigen::Vector3d(0, 0, z_fsm), rf, 0.0};
  Eigen::Matrix3d rd;
  rd.col(0) = Eigen::Vector3d(0, 0, 1);
  rd.col(1) = Eigen::Vector3d(0, 1, 0);
  rd.col(2) = Eigen::Vector3d(-1, 0, 0);
  OpticalElement ccd{"CCD", ElementKind::Detector, Eigen::Vector3d(arm, 0, z_fsm), rd, 0.0};
  t.elements = {m1, m2, fsm, ccd};
  return t;
}

Eigen::Matrix2d plate_matrix(const Telescope& t) {
  // Spot motion per telescope rotation about x and y (equivalently, the
  // incoming direction rotated the opposite way), inverted.
  const double h = 1e-6;
  Eigen::Matrix2d j;
  for (int k = 0; k < 2; ++k) {
    Eigen::Vector3d r = Eigen::Vector3d::Zero();
    r(k) = h;
    const Eigen::Vector2d plus = trace_spot(t, {}, Eigen::Vector2d::Zero(), rot(-r) * nominal_incoming());
    const Eigen::Vector2d minus = trace_spot(t, {}, Eigen::Vector2d::Zero(), rot(r) * nominal_incoming());
    j.col(k) = (plus - minus) / (2.0 * h);
  }
  return j.inverse();
}

TraceResult trace_chief_ray(const Telescope& t, const std::vector<ElementPose>& poses, const Eigen::Vector2d& fsm_tilt) {
  if (!poses.empty() && poses.size() != t.elements.size())
    throw DimensionError("one pose per optical element is required");
  check_bounds(poses, fsm_tilt);
  TraceResult r;
  r.spot = trace_spot(t, poses, fsm_tilt, nominal_incoming());
  r.los = plate_matrix(t) * r.spot;
  return r;
}

std::size_t LOSSensitivity::index(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return i;
  throw LabelError("no optical degree of freedom named '" + label + "'");
}

LOSSensitivity los_sensitivity(const Telescope& t) {
  std::vector<std::string> errors;
  t.validate(errors);
  if (!errors.empty()) throw ConfigError(errors);
  const Eigen::Matrix2d plate = plate_matrix(t);
  const std::size_t n = t.elements.size();
  const std::size_t fsm = t.fsm_index();

  LOSSensitivity s;
  s.matrix.resize(2, static_cast<Eigen::Index>(6 * n + 2));
  auto eval = [&](std::size_t col, double step) -> Eigen::Vector2d {
    std::vector<ElementPose> poses(n);
    Eigen::Vector2d tilt = Eigen::Vector2d::Zero();
    if (col < 6 * n) {
      auto& p = poses[col / 6];
      if (col % 6 < 3) p.translation(static_cast<Eigen::Index>(col % 6)) = step;
      else p.rotation(static_cast<Eigen::Index>(col % 6 - 3)) = step;
    } else {
      tilt(static_cast<Eigen::Index>(col - 6 * n)) = step;
    }
    return plate * trace_spot(t, poses, tilt, nominal_incoming());
  };
  const double h = 1e-5;
  for (std::size_t col = 0; col < 6 * n + 2; ++col) {
    const std::string label = col < 6 * n ? t.elements[col / 6].name + "." + kDof[col % 6]
                                          : t.elements[fsm].name + (col == 6 * n ? ".tip" : ".tilt");
    s.labels.push_back(label);
    const Eigen::Vector2d full = (eval(col, h) - eval(col, -h)) / (2.0 * h);
    const Eigen::Vector2d half = (eval(col, h / 2) - eval(col, -h / 2)) / h;
    if (!full.allFinite() || !half.allFinite()) throw Error("non-finite optical sensitivity for " + label);
    const double scale = std::max(half.norm(), 1e-3);
    if ((full - half).norm() > 1e-6 * scale)
      throw Error(fmt::format("optical sensitivity for {} failed the half-step check ({:.3g})", label,
                              (full - half).norm() / scale));
    // Richardson-extrapolated column.
    s.matrix.col(static_cast<Eigen::Index>(col)) = (4.0 * half - full) / 3.0;
  }
  return s;
}

Eigen::Vector2d los_error(const LOSSensitivity& s, const std::vector<std::string>& labels, const Eigen::VectorXd& values) {
  if (static_cast<Eigen::Index>(labels.size()) != values.size())
    throw DimensionError("labels and values differ in length");
  Eigen::Vector2d out = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < labels.size(); ++i)
    out += s.matrix.col(static_cast<Eigen::Index>(s.index(labels[i]))) * values(static_cast<Eigen::Index>(i));
  return out;
}

}  // namespace spcm::optics
