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

#include "spcm/structure/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "spcm/error.hpp"
#include "spcm/sim/quaternion.hpp"

namespace spcm::structure {

namespace {

constexpr double kSymTol = 1e-9;

const char* const kAxis6[6] = {"x", "y", "z", "rx", "ry", "rz"};
const char* const kWrench6[6] = {"fx", "fy", "fz", "tx", "ty", "tz"};

bool is_symmetric(const Eigen::MatrixXd& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= kSymTol * scale;
}

// Smallest eigenvalue of the symmetric part, relative to the largest |entry|.
double min_eig_relative(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  const Eigen::MatrixXd s = 0.5 * (m + m.transpose());
  const double scale = std::max(1e-300, s.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() / scale;
}

bool is_psd(const Eigen::MatrixXd& m) { return min_eig_relative(m) >= -1e-9; }
bool is_pd(const Eigen::MatrixXd& m) { return min_eig_relative(m) > 1e-12; }

bool is_rotation(const Eigen::Matrix3d& r) {
  return (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9 &&
         std::abs(r.determinant() - 1.0) < 1e-9;
}

void check_matrix6(const std::string& path, const Matrix6& m, bool need_pd,
                   std::vector<std::string>& errors) {
  if (!m.allFinite()) {
    errors.push_back(path + ": non-finite entries");
    return;
  }
  if (!is_symmetric(m)) errors.push_back(path + ": not symmetric");
  if (need_pd ? !is_pd(m) : !is_psd(m))
    errors.push_back(path + (need_pd ? ": not positive definite" : ": not positive semidefinite"));
}

}  // namespace

Matrix6 rigid_transfer(const Eigen::Vector3d& r) {
  Matrix6 t = Matrix6::Identity();
  t.block<3, 3>(0, 3) = -sim::skew(r);
  return t;
}

Matrix6 rotate6(const Eigen::Matrix3d& r) {
  Matrix6 t = Matrix6::Zero();
  t.block<3, 3>(0, 0) = r;
  t.block<3, 3>(3, 3) = r;
  return t;
}

Matrix6 RigidBody::mass_matrix_at(const Eigen::Vector3d& point) const {
  Matrix6 mc = Matrix6::Zero();
  mc.block<3, 3>(0, 0) = mass * Eigen::Matrix3d::Identity();
  mc.block<3, 3>(3, 3) = inertia;
  const Matrix6 t = rigid_transfer(com - point);
  return t.transpose() * mc * t;
}

void RigidBody::validate(const std::string& path, std::vector<std::string>& errors) const {
  if (!(mass > 0.0) || !std::isfinite(mass)) errors.push_back(path + ".mass: must be positive");
  if (!inertia.allFinite() || !com.allFinite()) {
    errors.push_back(path + ": non-finite inertia or CoM");
    return;
  }
  if (!is_symmetric(inertia)) errors.push_back(path + ".inertia: not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(0.5 * (inertia + inertia.transpose()));
  const Eigen::Vector3d p = es.eigenvalues();
  if (p.minCoeff() <= 0.0) {
    errors.push_back(path + ".inertia: not positive definite");
  } else {
    const double tol = 1e-9 * p.maxCoeff();
    if (p(0) + p(1) < p(2) - tol || p(0) + p(2) < p(1) - tol || p(1) + p(2) < p(0) - tol)
      errors.push_back(path + ".inertia: violates the triangle inequality");
  }
}

Matrix6 FlexibleAppendage::residual_mass() const {
  Matrix6 r = rigid_mass;
  if (participation.cols() > 0) r -= participation * participation.transpose();
  return r;
}

void FlexibleAppendage::validate(const std::string& path, std::vector<std::string>& errors) const {
  check_matrix6(path + ".mass_matrix", rigid_mass, false, errors);
  if (!(rigid_mass(0, 0) > 0.0)) errors.push_back(path + ".mass_matrix: mass must be positive");
  const auto n = frequencies.size();
  if (damping.size() != n)
    errors.push_back(fmt::format("{}.damping: {} entries for {} modes", path, damping.size(), n));
  if (participation.rows() != 6 || participation.cols() != n)
    errors.push_back(fmt::format("{}.participation: shape {}x{}, expected 6x{}", path,
                                 participation.rows(), participation.cols(), n));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(frequencies(i) > 0.0) || !std::isfinite(frequencies(i)))
      errors.push_back(fmt::format("{}.frequencies[{}]: must be positive", path, i));
    if (i < damping.size() && !(damping(i) >= 0.0 && damping(i) < 1.0))
      errors.push_back(fmt::format("{}.damping[{}]: must be in [0, 1)", path, i));
  }
  if (participation.rows() == 6 && participation.cols() == n) {
    if (!participation.allFinite())
      errors.push_back(path + ".participation: non-finite entries");
    else if (!is_psd(residual_mass()))
      errors.push_back(path + ": residual mass (M - sum L L^T) is not positive semidefinite");
  }
}

Matrix6c dynamic_mass(const FlexibleAppendage& a, double omega) {
  Matrix6c d = a.rigid_mass.cast<std::complex<double>>();
  const std::complex<double> s(0.0, omega);
  for (std::size_t i = 0; i < a.num_modes(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double wi = a.frequencies(k);
    const std::complex<double> h = s * s / (s * s + 2.0 * a.damping(k) * wi * s + wi * wi);
    const Vector6 l = a.participation.col(k);
    d -= h * (l * l.transpose()).cast<std::complex<double>>();
  }
  return d;
}

void Isolator6DoF::validate(const std::string& path, std::vector<std::string>& errors) const {
  check_matrix6(path + ".stiffness", stiffness, true, errors);
  check_matrix6(path + ".damping", damping, false, errors);
  if (!node.allFinite()) errors.push_back(path + ".node: non-finite");
}

void SloshModel::validate(const std::string& path, std::vector<std::string>& errors) const {
  if (!(mass > 0.0)) errors.push_back(path + ".mass: must be positive");
  if (!(fluid_mass >= mass)) errors.push_back(path + ".mass: exceeds the tank fluid mass");
  if (!(frequency > 0.0)) errors.push_back(path + ".frequency: must be positive");
  if (!(damping >= 0.0 && damping < 1.0)) errors.push_back(path + ".damping: must be in [0, 1)");
  if (!(axis.norm() > 0.0)) errors.push_back(path + ".axis: zero vector");
}

void WheelMount::validate(const std::string& path, std::vector<std::string>& errors) const {
  if (!(mass > 0.0)) errors.push_back(path + ".mass: must be positive");
  if (!(inertia.minCoeff() > 0.0)) errors.push_back(path + ".inertia: must be positive");
  if (!(rotor_inertia >= 0.0)) errors.push_back(path + ".rotor_inertia: must be non-negative");
  if (!is_rotation(orientation)) errors.push_back(path + ".orientation: not a rotation");
  if (isolator_stiffness.has_value() != isolator_damping.has_value())
    errors.push_back(path + ".isolator: stiffness and damping must both be given");
  if (isolator_stiffness) check_matrix6(path + ".isolator.stiffness", *isolator_stiffness, true, errors);
  if (isolator_damping) check_matrix6(path + ".isolator.damping", *isolator_damping, false, errors);
}

Eigen::Matrix3d frame_from_axis(const Eigen::Vector3d& spin_axis) {
  const Eigen::Vector3d z = spin_axis.normalized();
  // Pick the hub axis least aligned with z to seed x.
  Eigen::Index k = 0;
  z.cwiseAbs().minCoeff(&k);
  Eigen::Vector3d seed = Eigen::Vector3d::Zero();
  seed(k) = 1.0;
  const Eigen::Vector3d x = (seed - seed.dot(z) * z).normalized();
  Eigen::Matrix3d r;
  r.col(0) = x;
  r.col(1) = z.cross(x);
  r.col(2) = z;
  return r;
}

std::vector<std::string> wheel_input_names(std::size_t k) {
  std::vector<std::string> out;
  for (const char* w : kWrench6) out.push_back(fmt::format("w{}_{}", k + 1, w));
  return out;
}

std::vector<std::string> wheel_mount_output_names(std::size_t k) {
  std::vector<std::string> out;
  for (const char* w : kWrench6) out.push_back(fmt::format("w{}_mount_{}", k + 1, w));
  return out;
}

std::vector<std::string> hub_alpha_names() { return {"hub_alpha_x", "hub_alpha_y", "hub_alpha_z"}; }

std::vector<double> CoupledLinearModel::flexible_frequencies() const {
  std::vector<double> f;
  for (Eigen::Index i = 0; i < elastic_poles.size(); ++i)
    if (elastic_poles(i).imag() > 0.0) f.push_back(std::abs(elastic_poles(i)));
  std::sort(f.begin(), f.end());
  return f;
}

double CoupledLinearModel::max_frequency() const {
  double m = 0.0;
  for (Eigen::Index i = 0; i < elastic_poles.size(); ++i) m = std::max(m, std::abs(elastic_poles(i)));
  return m;
}

Eigen::VectorXcd CoupledLinearModel::poles() const {
  Eigen::VectorXcd p = Eigen::VectorXcd::Zero(12 + elastic_poles.size());
  p.tail(elastic_poles.size()) = elastic_poles;
  return p;
}

namespace {

struct Body {
  std::string name;
  std::size_t first = 0;
  std::size_t count = 0;
};

}  // namespace

CoupledLinearModel assemble(const SpacecraftStructure& sc, std::array<double, 2> theta,
                            const AssemblyOptions& options) {
  // Validation first, collecting everything.
  std::vector<std::string> errors;
  sc.hub.validate("hub", errors);
  for (std::size_t i = 0; i < sc.appendages.size(); ++i) {
    const auto& am = sc.appendages[i];
    const std::string path = fmt::format("appendages[{}]({})", i, am.appendage.name);
    am.appendage.validate(path, errors);
    if (!is_rotation(am.orientation)) errors.push_back(path + ".orientation: not a rotation");
    if (am.sadm) {
      if (am.sadm->drive > 1) errors.push_back(path + ".sadm.drive: must be 0 or 1");
      if (!(am.sadm->axis.norm() > 0.0)) errors.push_back(path + ".sadm.axis: zero vector");
      if (am.sadm->compliant && !(am.sadm->stiffness > 0.0))
        errors.push_back(path + ".sadm.stiffness: must be positive");
      if (am.sadm->compliant && !(am.sadm->damping >= 0.0))
        errors.push_back(path + ".sadm.damping: must be non-negative");
    }
  }
  if (sc.payload) {
    sc.payload->body.validate("payload", errors);
    sc.payload->isolator.validate("payload_isolator", errors);
  }
  if (sc.slosh) sc.slosh->validate("slosh", errors);
  for (std::size_t k = 0; k < sc.wheels.size(); ++k)
    sc.wheels[k].validate(fmt::format("wheels[{}]", k), errors);
  for (double t : theta)
    if (!std::isfinite(t)) errors.push_back("sadm angle: non-finite");
  if (options.gyroscopic && !options.wheel_speeds.empty() &&
      options.wheel_speeds.size() != sc.wheels.size())
    errors.push_back("wheel speeds: count does not match the wheel count");
  if (!errors.empty()) throw ConfigError(errors);

  // Coordinate layout.
  CoupledLinearModel out;
  out.theta = theta;
  CoordinateLayout& lay = out.layout;
  std::vector<std::string>& names = out.coordinate_names;
  std::vector<Body> bodies;
  for (const char* a : kAxis6) names.push_back(fmt::format("hub.{}", a));
  std::size_t n = 6;
  for (const auto& am : sc.appendages) {
    Body b{am.appendage.name, n, 0};
    if (am.sadm && am.sadm->compliant) {
      lay.sadm.push_back(n);
      names.push_back(am.appendage.name + ".sadm");
      ++n;
    } else {
      lay.sadm.push_back(std::nullopt);
    }
    lay.appendage_modes.push_back(n);
    for (std::size_t m = 0; m < am.appendage.num_modes(); ++m)
      names.push_back(fmt::format("{}.mode{}", am.appendage.name, m + 1));
    n += am.appendage.num_modes();
    b.count = n - b.first;
    bodies.push_back(b);
  }
  if (sc.payload) {
    Body b{"payload", n, 0};
    lay.payload_isolator = n;
    for (const char* a : kAxis6) names.push_back(fmt::format("payload_iso.{}", a));
    n += 6;
    lay.payload_modes = n;
    for (std::size_t m = 0; m < sc.payload->body.num_modes(); ++m)
      names.push_back(fmt::format("payload.mode{}", m + 1));
    n += sc.payload->body.num_modes();
    b.count = n - b.first;
    bodies.push_back(b);
  }
  if (sc.slosh) {
    lay.slosh = n;
    names.push_back("slosh.1");
    names.push_back("slosh.2");
    bodies.push_back({"slosh", n, 2});
    n += 2;
  }
  for (std::size_t k = 0; k < sc.wheels.size(); ++k) {
    if (sc.wheels[k].isolator_stiffness) {
      lay.wheel_isolator.push_back(n);
      for (const char* a : kAxis6) names.push_back(fmt::format("w{}_iso.{}", k + 1, a));
      bodies.push_back({fmt::format("wheel {}", k + 1), n, 6});
      n += 6;
    } else {
      lay.wheel_isolator.push_back(std::nullopt);
    }
  }
  lay.size = n;
  const auto N = static_cast<Eigen::Index>(n);

  // Inputs.
  std::vector<std::string> inputs;
  for (const char* w : kWrench6) inputs.push_back(fmt::format("hub_{}", w));
  for (const char* w : kWrench6) inputs.push_back(fmt::format("thr_{}", w));
  for (std::size_t k = 0; k < sc.wheels.size(); ++k)
    for (const auto& s : wheel_input_names(k)) inputs.push_back(s);
  inputs.push_back("sadm1_torque");
  inputs.push_back("sadm2_torque");
  inputs.push_back("pma_fx");
  inputs.push_back("pma_fy");
  inputs.push_back("pma_fz");
  const auto NU = static_cast<Eigen::Index>(inputs.size());
  const Eigen::Index col_wheel0 = 12;
  const Eigen::Index col_sadm = col_wheel0 + 6 * static_cast<Eigen::Index>(sc.wheels.size());
  const Eigen::Index col_pma = col_sadm + 2;

  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N, N);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(N, N);
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(N, NU);
  double total_mass = sc.hub.mass;

  M.topLeftCorner<6, 6>() += sc.hub.mass_matrix_at();
  F.block<6, 6>(0, 0).setIdentity();
  F.block<6, 6>(0, 6).setIdentity();

  // Appendages on (optionally compliant) drives.
  for (std::size_t i = 0; i < sc.appendages.size(); ++i) {
    const auto& am = sc.appendages[i];
    const auto& ap = am.appendage;
    Eigen::Matrix3d r = am.orientation;
    if (am.sadm) {
      const double angle = theta[am.sadm->drive];
      r = am.orientation * Eigen::AngleAxisd(angle, am.sadm->axis.normalized()).toRotationMatrix();
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(6, N);
    t.leftCols<6>() = rotate6(r).transpose() * rigid_transfer(am.position);
    if (lay.sadm[i]) {
      const auto a = static_cast<Eigen::Index>(*lay.sadm[i]);
      t.block<3, 1>(3, a) = am.sadm->axis.normalized();
      K(a, a) += am.sadm->stiffness;
      C(a, a) += am.sadm->damping;
      F(a, col_sadm + static_cast<Eigen::Index>(am.sadm->drive)) += 1.0;
    }
    M += t.transpose() * ap.rigid_mass * t;
    const auto e0 = static_cast<Eigen::Index>(lay.appendage_modes[i]);
    const auto nm = static_cast<Eigen::Index>(ap.num_modes());
    if (nm > 0) {
      const Eigen::MatrixXd coupling = t.transpose() * ap.participation;  // N x nm
      M.middleCols(e0, nm) += coupling;
      M.middleRows(e0, nm) += coupling.transpose();
      M.block(e0, e0, nm, nm) += Eigen::MatrixXd::Identity(nm, nm);
      for (Eigen::Index m = 0; m < nm; ++m) {
        const double w = ap.frequencies(m);
        K(e0 + m, e0 + m) += w * w;
        C(e0 + m, e0 + m) += 2.0 * ap.damping(m) * w;
      }
    }
    total_mass += ap.mass();
  }

  // Payload on its isolator.
  if (sc.payload) {
    const auto& pl = *sc.payload;
    const auto d0 = static_cast<Eigen::Index>(*lay.payload_isolator);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(6, N);
    t.leftCols<6>() = rigid_transfer(pl.isolator.node);
    t.block<6, 6>(0, d0).setIdentity();
    M += t.transpose() * pl.body.rigid_mass * t;
    const auto e0 = static_cast<Eigen::Index>(*lay.payload_modes);
    const auto nm = static_cast<Eigen::Index>(pl.body.num_modes());
    if (nm > 0) {
      const Eigen::MatrixXd coupling = t.transpose() * pl.body.participation;
      M.middleCols(e0, nm) += coupling;
      M.middleRows(e0, nm) += coupling.transpose();
      M.block(e0, e0, nm, nm) += Eigen::MatrixXd::Identity(nm, nm);
      for (Eigen::Index m = 0; m < nm; ++m) {
        const double w = pl.body.frequencies(m);
        K(e0 + m, e0 + m) += w * w;
        C(e0 + m, e0 + m) += 2.0 * pl.body.damping(m) * w;
      }
    }
    K.block<6, 6>(d0, d0) += pl.isolator.stiffness;
    C.block<6, 6>(d0, d0) += pl.isolator.damping;
    F.block(0, col_pma, N, 3) += t.transpose().leftCols<3>();
    total_mass += pl.body.mass();
  }

  // Slosh pendulum-equivalent spring-mass.
  if (sc.slosh) {
    const auto& s = *sc.slosh;
    const auto s0 = static_cast<Eigen::Index>(*lay.slosh);
    const Eigen::Matrix3d frame = frame_from_axis(s.axis);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(3, N);
    t.leftCols<6>() = rigid_transfer(s.node).topRows<3>();
    t.block<3, 2>(0, s0) = frame.leftCols<2>();
    M += s.mass * t.transpose() * t;
    const double k = s.mass * s.frequency * s.frequency;
    const double c = 2.0 * s.damping * s.frequency * s.mass;
    K.block<2, 2>(s0, s0) += k * Eigen::Matrix2d::Identity();
    C.block<2, 2>(s0, s0) += c * Eigen::Matrix2d::Identity();
    total_mass += s.mass;
  }

  // Wheel assemblies.
  std::vector<Eigen::MatrixXd> wheel_t(sc.wheels.size());
  std::vector<Matrix6> wheel_m(sc.wheels.size());
  for (std::size_t k = 0; k < sc.wheels.size(); ++k) {
    const auto& w = sc.wheels[k];
    Matrix6 mw = Matrix6::Zero();
    mw.diagonal() << w.mass, w.mass, w.mass, w.inertia(0), w.inertia(1), w.inertia(2);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(6, N);
    t.leftCols<6>() = rotate6(w.orientation).transpose() * rigid_transfer(w.position);
    if (lay.wheel_isolator[k]) {
      const auto d0 = static_cast<Eigen::Index>(*lay.wheel_isolator[k]);
      t.block<6, 6>(0, d0).setIdentity();
      K.block<6, 6>(d0, d0) += *w.isolator_stiffness;
      C.block<6, 6>(d0, d0) += *w.isolator_damping;
      if (options.gyroscopic && !options.wheel_speeds.empty()) {
        // Rotor momentum acting on the isolator rocking coordinates only; the
        // hub-rate share is a rigid-body nutation far below the isolator band.
        const double h = w.rotor_inertia * options.wheel_speeds[k];
        Eigen::Matrix3d g = -sim::skew(Eigen::Vector3d(0.0, 0.0, h));
        C.block<3, 3>(d0 + 3, d0 + 3) += g;
      }
    }
    M += t.transpose() * mw * t;
    F.block(0, col_wheel0 + 6 * static_cast<Eigen::Index>(k), N, 6) += t.transpose();
    wheel_t[k] = t;
    wheel_m[k] = mw;
    total_mass += w.mass;
  }

  M = 0.5 * (M + M.transpose());

  // Definiteness, body by body, then overall.
  if (!is_pd(M.topLeftCorner<6, 6>())) throw ConfigError("hub: composite mass matrix is indefinite");
  for (const auto& b : bodies) {
    const auto f = static_cast<Eigen::Index>(b.first);
    const auto c = static_cast<Eigen::Index>(b.count);
    if (c > 0 && !is_pd(M.block(f, f, c, c)))
      throw ConfigError(fmt::format("{}: mass matrix block is indefinite", b.name));
  }
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success || !is_pd(M))
    throw ConfigError("assembled mass matrix is indefinite");

  // Elastic poles from the hub-condensed problem (K and C vanish on the hub block).
  const Eigen::Index ne = N - 6;
  if (ne > 0) {
    const Eigen::MatrixXd mhh = M.topLeftCorner<6, 6>();
    const Eigen::MatrixXd mhe = M.topRightCorner(6, ne);
    const Eigen::MatrixXd mc =
        M.bottomRightCorner(ne, ne) - mhe.transpose() * mhh.ldlt().solve(mhe);
    const Eigen::MatrixXd ke = K.bottomRightCorner(ne, ne);
    const Eigen::MatrixXd ce = C.bottomRightCorner(ne, ne);
    Eigen::LLT<Eigen::MatrixXd> lc(mc);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * ne, 2 * ne);
    a.topRightCorner(ne, ne).setIdentity();
    a.bottomLeftCorner(ne, ne) = -lc.solve(ke);
    a.bottomRightCorner(ne, ne) = -lc.solve(ce);
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
    out.elastic_poles = es.eigenvalues();
  }
  for (Eigen::Index i = 0; i < out.elastic_poles.size(); ++i) {
    if (out.elastic_poles(i).real() > 1e-9) {
      throw ConfigError(fmt::format("assembled structure is not passive: pole {:.6g}{:+.6g}j",
                                    out.elastic_poles(i).real(), out.elastic_poles(i).imag()));
    }
  }

  // First-order realization with named outputs.
  const Eigen::MatrixXd minv_k = llt.solve(K);
  const Eigen::MatrixXd minv_c = llt.solve(C);
  const Eigen::MatrixXd minv_f = llt.solve(F);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  a.topRightCorner(N, N).setIdentity();
  a.bottomLeftCorner(N, N) = -minv_k;
  a.bottomRightCorner(N, N) = -minv_c;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2 * N, NU);
  b.bottomRows(N) = minv_f;
  // Acceleration rows: q'' = [-Minv K, -Minv C] x + Minv F u.
  Eigen::MatrixXd acc_c(N, 2 * N);
  acc_c << -minv_k, -minv_c;

  std::vector<Eigen::RowVectorXd> c_rows;
  std::vector<Eigen::RowVectorXd> d_rows;
  std::vector<std::string> outputs;
  auto add = [&](std::string name, Eigen::RowVectorXd c, Eigen::RowVectorXd d) {
    outputs.push_back(std::move(name));
    c_rows.push_back(std::move(c));
    d_rows.push_back(std::move(d));
  };
  const Eigen::RowVectorXd zero_d = Eigen::RowVectorXd::Zero(NU);
  for (int i = 0; i < 6; ++i) {
    Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(2 * N);
    c(i) = 1.0;
    add(fmt::format("hub_{}", kAxis6[i]), c, zero_d);
  }
  const char* const rate_names[6] = {"hub_vx", "hub_vy", "hub_vz", "hub_wx", "hub_wy", "hub_wz"};
  for (int i = 0; i < 6; ++i) {
    Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(2 * N);
    c(N + i) = 1.0;
    add(rate_names[i], c, zero_d);
  }
  const char* const acc_names[6] = {"hub_acc_x",   "hub_acc_y",   "hub_acc_z",
                                    "hub_alpha_x", "hub_alpha_y", "hub_alpha_z"};
  for (int i = 0; i < 6; ++i) add(acc_names[i], acc_c.row(i), minv_f.row(i));
  if (sc.payload) {
    const auto d0 = static_cast<Eigen::Index>(*lay.payload_isolator);
    const Matrix6 tr = rigid_transfer(sc.payload->isolator.node);
    for (int i = 0; i < 6; ++i) {
      Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(2 * N);
      c.head<6>() = tr.row(i);
      c(d0 + i) += 1.0;
      add(fmt::format("payload_{}", kAxis6[i]), c, zero_d);
    }
    for (int i = 0; i < 6; ++i) {
      Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(2 * N);
      c(d0 + i) = 1.0;
      add(fmt::format("iso_{}", kAxis6[i]), c, zero_d);
    }
  }
  for (std::size_t k = 0; k < sc.wheels.size(); ++k) {
    const auto names_k = wheel_mount_output_names(k);
    if (lay.wheel_isolator[k]) {
      const auto d0 = static_cast<Eigen::Index>(*lay.wheel_isolator[k]);
      for (int i = 0; i < 6; ++i) {
        Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(2 * N);
        c.segment(d0, 6) = sc.wheels[k].isolator_stiffness->row(i);
        c.segment(N + d0, 6) = sc.wheels[k].isolator_damping->row(i);
        add(names_k[static_cast<std::size_t>(i)], c, zero_d);
      }
    } else {
      // Hard mount: whatever does not accelerate the wheel reaches the hub.
      const Eigen::MatrixXd mt = wheel_m[k] * wheel_t[k];  // 6 x N
      for (int i = 0; i < 6; ++i) {
        Eigen::RowVectorXd d = -mt.row(i) * minv_f;
        d(col_wheel0 + 6 * static_cast<Eigen::Index>(k) + i) += 1.0;
        add(names_k[static_cast<std::size_t>(i)], -mt.row(i) * acc_c, d);
      }
    }
  }

  Eigen::MatrixXd cm(static_cast<Eigen::Index>(c_rows.size()), 2 * N);
  Eigen::MatrixXd dm(static_cast<Eigen::Index>(d_rows.size()), NU);
  for (std::size_t i = 0; i < c_rows.size(); ++i) {
    cm.row(static_cast<Eigen::Index>(i)) = c_rows[i];
    dm.row(static_cast<Eigen::Index>(i)) = d_rows[i];
  }
  std::vector<std::string> states;
  for (const auto& s : names) states.push_back("q:" + s);
  for (const auto& s : names) states.push_back("dq:" + s);

  out.model = sim::StateSpace(a, b, cm, dm, states, inputs, outputs);
  out.mass = std::move(M);
  out.damping = std::move(C);
  out.stiffness = std::move(K);
  out.forcing = std::move(F);
  out.total_mass = total_mass;
  return out;
}

CoupledLinearModel set_sadm_angle(const SpacecraftStructure& sc, std::array<double, 2> theta) {
  for (double t : theta) {
    if (!(t >= 0.0 && t < 2.0 * std::numbers::pi))
      throw ConfigError(fmt::format("sadm angle {} rad outside [0, 2pi)", t));
  }
  return assemble(sc, theta);
}

sim::StateSpace wheel_mount_transfer(const CoupledLinearModel& model, std::size_t wheel_index) {
  if (wheel_index >= model.layout.wheel_isolator.size())
    throw LabelError(fmt::format("no wheel with index {}", wheel_index));
  return model.model.select(wheel_input_names(wheel_index), hub_alpha_names());
}

}  // namespace spcm::structure
