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


#include "spcm/mission/plant.hpp"

#include <utility>

#include "spcm/error.hpp"

namespace spcm::mission {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;

Plant::Plant(structure::CoupledLinearModel model, const actuators::RWPyramid& wheels,
             const actuators::WheelFidelity& fidelity)
    : model_(std::move(model)), wheels_(wheels), fidelity_(fidelity) {
  const Index n = model_.mass.rows();
  ne_ = static_cast<std::size_t>(n - 6);
  const Index ne = static_cast<Index>(ne_);
  for (const auto& w : wheels_.wheels)
    if (!(w.rotor_inertia > 0.0)) throw ConfigError("plant: rotor inertia must be positive");
  spin_momentum_ = wheels_.allocation_matrix();
  for (Index k = 0; k < 4; ++k) spin_momentum_.col(k) *= wheels_.wheels[static_cast<std::size_t>(k)].rotor_inertia;
  forcing_ = model_.forcing;
  for (std::size_t k = 0; k < 4; ++k) wheel_input_[k] = input(structure::wheel_input_names(k).front());

  const Eigen::LDLT<MatrixXd> m(model_.mass);
  if (m.info() != Eigen::Success) throw ConfigError("plant: mass matrix is not positive definite");
  const MatrixXd minv = m.solve(MatrixXd::Identity(n, n));
  mass_hh_ = model_.mass.topLeftCorner(6, 6);
  mass_he_ = model_.mass.topRightCorner(6, ne);
  minv_f_ = minv * forcing_;
  minv_hub_ = minv.leftCols(6);
  minv_k_ = minv.rightCols(ne) * model_.stiffness.bottomRightCorner(ne, ne);
  minv_c_ = minv.rightCols(ne) * model_.damping.bottomRightCorner(ne, ne);
  minv_fw_.resize(n, 24);
  for (std::size_t k = 0; k < 4; ++k)
    minv_fw_.middleCols(static_cast<Index>(6 * k), 6) = minv_f_.middleCols(static_cast<Index>(wheel_input_[k]), 6);
}

std::size_t Plant::input(const std::string& name) const {
  const auto i = model_.model.input_index(name);
  if (!i) throw LabelError("plant: no input '" + name + "'");
  return *i;
}

VectorXd Plant::initial_state(const sim::Quaternion& q, const Eigen::Vector4d& wheel_speeds) const {
  VectorXd x = VectorXd::Zero(static_cast<Index>(state_size()));
  const sim::Quaternion u = q.normalized();
  x.head<4>() << u.w(), u.x(), u.y(), u.z();
  x.segment<4>(static_cast<Index>(10 + 2 * ne_)) = wheel_speeds;
  return x;
}

sim::Quaternion Plant::attitude(const VectorXd& x) { return sim::Quaternion(x(0), x(1), x(2), x(3)); }

void Plant::set_wheels(VectorXd& x, std::size_t k, double speed, double phase) const {
  x(static_cast<Index>(10 + 2 * ne_ + k)) = speed;
  x(static_cast<Index>(14 + 2 * ne_ + k)) = phase;
}

VectorXd Plant::derivative(const VectorXd& x, const VectorXd& a0, const Eigen::Vector4d& rotor_torque) const {
  const Index ne = static_cast<Index>(ne_);
  const Index n = 6 + ne;
  const sim::Quaternion q = attitude(x);
  const auto v = x.segment<6>(4);
  const auto qe = x.segment(10, ne);
  const auto dqe = x.segment(10 + ne, ne);
  const auto speed = x.segment<4>(10 + 2 * ne);
  const auto phase = x.segment<4>(14 + 2 * ne);

  const Eigen::Matrix<double, 6, 1> p = mass_hh_ * v + mass_he_ * dqe;
  const Vector3d lin = v.head<3>(), w = v.tail<3>();
  const Vector3d hw = spin_momentum_ * speed;
  Eigen::Matrix<double, 6, 1> nl;
  nl.head<3>() = w.cross(p.head<3>());
  nl.tail<3>() = lin.cross(p.head<3>()) + w.cross(p.tail<3>() + hw);

  VectorXd acc = a0 - minv_hub_ * nl - minv_k_ * qe - minv_c_ * dqe;
  if (fidelity_.imbalance) {
    Eigen::Matrix<double, 24, 1> imb;
    for (std::size_t k = 0; k < 4; ++k)
      imb.segment<6>(static_cast<Index>(6 * k)) =
          actuators::imbalance_wrench(wheels_.wheels[k], speed(static_cast<Index>(k)), phase(static_cast<Index>(k)), fidelity_);
    acc.noalias() += minv_fw_ * imb;
  }

  VectorXd dx(x.size());
  dx.head<4>() = sim::quat_derivative(q, w);
  dx.segment(4, n) << acc.head<6>(), dqe;
  dx.segment(10 + ne, ne) = acc.tail(ne);
  for (Index k = 0; k < 4; ++k) dx(10 + 2 * ne + k) = rotor_torque(k) / wheels_.wheels[static_cast<std::size_t>(k)].rotor_inertia;
  dx.segment<4>(14 + 2 * ne) = speed;
  return dx;
}

void Plant::step(VectorXd& x, const VectorXd& u, const Eigen::Vector4d& rotor_torque, double dt) const {
  const VectorXd a0 = minv_f_ * u;
  const VectorXd k1 = derivative(x, a0, rotor_torque);
  const VectorXd k2 = derivative(x + 0.5 * dt * k1, a0, rotor_torque);
  const VectorXd k3 = derivative(x + 0.5 * dt * k2, a0, rotor_torque);
  const VectorXd k4 = derivative(x + dt * k3, a0, rotor_torque);
  x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  x.head<4>().normalize();
}

Vector3d Plant::angular_momentum(const VectorXd& x) const {
  const Index ne = static_cast<Index>(ne_);
  const Eigen::Matrix<double, 6, 1> p = mass_hh_ * x.segment<6>(4) + mass_he_ * x.segment(10 + ne, ne);
  const Vector3d hw = spin_momentum_ * x.segment<4>(10 + 2 * ne);
  return attitude(x) * (p.tail<3>() + hw);
}

MatrixXd Plant::output_rows(const std::vector<std::string>& names) const {
  const auto& ss = model_.model;
  const Index n = static_cast<Index>(6 + ne_);
  const Index ne = static_cast<Index>(ne_);
  MatrixXd rows(static_cast<Index>(names.size()), 6 + 2 * ne);
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto o = ss.output_index(names[i]);
    if (!o) throw LabelError("plant: no output '" + names[i] + "'");
    const auto c = ss.c().row(static_cast<Index>(*o));
    // Order matches the plant state after the quaternion: [v | q_e | q_e'].
    rows.row(static_cast<Index>(i)) << c.segment(n, 6), c.segment(6, ne), c.segment(n + 6, ne);
  }
  return rows;
}

VectorXd Plant::outputs(const MatrixXd& rows, const VectorXd& x) const {
  return rows * x.segment(4, rows.cols());
}

}  // namespace spcm::mission
