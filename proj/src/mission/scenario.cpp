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


#include "spcm/mission/scenario.hpp"

#include <cmath>

#include <fmt/format.h>

#include "spcm/error.hpp"
#include "spcm/sim/schedule.hpp"

namespace spcm::mission {

namespace {

constexpr double kMaxOmegaDt = 0.3;

bool unit(const sim::Quaternion& q) { return std::abs(q.norm() - 1.0) < 1e-9; }

void check_rate(const std::string& name, double rate, double dt, std::vector<std::string>& errors) {
  if (!(rate > 0.0)) {
    errors.push_back(name + ": rate must be positive");
    return;
  }
  std::string why;
  if (!sim::commensurate_period(rate, dt, &why)) errors.push_back(name + ": " + why);
}

}  // namespace

actuators::RWPyramid WheelAssemblyConfig::pyramid() const { return actuators::RWPyramid::make(wheel, cant, azimuth); }

void WheelAssemblyConfig::validate(std::vector<std::string>& errors) const {
  pyramid().validate("spacecraft.wheels", errors);
  if (!(radius >= 0.0)) errors.push_back("spacecraft.wheels.radius: must be non-negative");
  if (!(housing_mass > 0.0)) errors.push_back("spacecraft.wheels.housing_mass: must be positive");
  if (!(housing_inertia.minCoeff() > 0.0)) errors.push_back("spacecraft.wheels.housing_inertia: must be positive");
  if (housing_inertia(2) < wheel.rotor_inertia)
    errors.push_back("spacecraft.wheels.housing_inertia: axial value must include the rotor inertia");
  if (isolator_stiffness.has_value() != isolator_damping.has_value())
    errors.push_back("spacecraft.wheels.isolator: stiffness and damping go together");
  if (!(null_gain >= 0.0)) errors.push_back("spacecraft.wheels.null_gain: must be non-negative");
  if (wheel.rotor_inertia > 0.0 && std::abs(bias_speed) * wheel.rotor_inertia * 2.0 > wheel.max_momentum)
    errors.push_back("spacecraft.wheels.bias_speed: bias uses more than half the momentum capacity");
}

std::vector<actuators::Thruster> RcsConfig::layout() const {
  return actuators::parallelepiped_layout(half_size, lever, prototype);
}

void RcsConfig::validate(std::vector<std::string>& errors) const {
  prototype.validate("spacecraft.rcs.thruster", errors);
  if (!(half_size > 0.0)) errors.push_back("spacecraft.rcs.half_size: must be positive");
  if (!(lever > 0.0)) errors.push_back("spacecraft.rcs.lever: must be positive");
}

void PhaseSuite::validate(const std::string& path, std::vector<std::string>& errors) const {
  gains.validate(path + ".gains", errors);
  if (!str && !gyro_coarse && !gyro_fine) errors.push_back(path + ": needs at least one attitude sensor");
  if (gyro_coarse && gyro_fine) errors.push_back(path + ": select one gyro grade");
  if (!rcs && !rws) errors.push_back(path + ": needs a torque actuator (rcs or rws)");
  if (rcs && rws) errors.push_back(path + ": select either rcs or rws for attitude torque");
  if (fsm && !fgs) errors.push_back(path + ": the FSM loop needs the FGS");
}

actuators::WheelFidelity wheel_fidelity(const Fidelity& f) {
  actuators::WheelFidelity w;
  w.friction = f.friction;
  w.imbalance = f.imbalances;
  w.harmonics = f.imbalances;
  w.spikes = f.spikes;
  w.noise = f.wheel_noise;
  return w;
}

structure::SpacecraftStructure build_structure(const Scenario& s) {
  const auto& sc = s.spacecraft;
  structure::SpacecraftStructure out;
  out.hub = sc.hub;
  out.appendages = sc.appendages;
  for (auto& a : out.appendages)
    if (a.sadm) {
      a.sadm->stiffness = sc.sadm.stiffness;
      a.sadm->damping = sc.sadm.damping;
    }
  out.payload = sc.payload;
  if (s.fidelity.sloshing) out.slosh = sc.slosh;
  const auto pyr = sc.wheels.pyramid();
  for (std::size_t k = 0; k < 4; ++k) {
    structure::WheelMount m;
    const double az = sc.wheels.azimuth[k];
    m.position = Eigen::Vector3d(sc.wheels.radius * std::cos(az), sc.wheels.radius * std::sin(az), sc.wheels.height);
    m.orientation = structure::frame_from_axis(pyr.wheels[k].spin_axis);
    m.mass = sc.wheels.housing_mass;
    m.inertia = sc.wheels.housing_inertia;
    m.rotor_inertia = sc.wheels.wheel.rotor_inertia;
    m.isolator_stiffness = sc.wheels.isolator_stiffness;
    m.isolator_damping = sc.wheels.isolator_damping;
    out.wheels.push_back(m);
  }
  return out;
}

std::vector<std::string> Scenario::validation_errors() const {
  std::vector<std::string> e;
  const auto& sc = spacecraft;
  const double dt = solver.dt;

  if (!(dt > 0.0)) e.push_back("solver.dt: must be positive");
  if (!(timeline.total > 0.0)) e.push_back("timeline.total: must be positive");

  sc.hub.validate("spacecraft.hub", e);
  for (std::size_t i = 0; i < sc.appendages.size(); ++i) {
    const auto& a = sc.appendages[i];
    const std::string p = "spacecraft.appendages[" + a.appendage.name + "]";
    a.appendage.validate(p, e);
    if (a.sadm && a.sadm->drive > 1) e.push_back(p + ".sadm.drive: must be 0 or 1");
    for (std::size_t j = 0; j < i; ++j)
      if (sc.appendages[j].appendage.name == a.appendage.name) e.push_back(p + ": duplicate appendage name");
  }
  if (sc.payload) {
    sc.payload->body.validate("spacecraft.payload", e);
    sc.payload->isolator.validate("spacecraft.payload.isolator", e);
  }
  if (sc.slosh) sc.slosh->validate("spacecraft.slosh", e);
  for (double th : sc.theta)
    if (!(th >= 0.0 && th < 2.0 * M_PI)) e.push_back("spacecraft.theta: angles must lie in [0, 2pi)");
  sc.wheels.validate(e);
  sc.rcs.validate(e);
  sc.sadm.validate("spacecraft.sadm", e);
  sc.fsm.validate("spacecraft.fsm", e);
  if (sc.fsm.stroke > optics::kParaxialLimit)
    e.push_back(fmt::format("spacecraft.fsm.stroke: {} rad exceeds the paraxial bound {}", sc.fsm.stroke,
                            optics::kParaxialLimit));
  sc.pma.validate("spacecraft.pma", e);
  sc.sensors.str.validate("spacecraft.sensors.star_tracker", e);
  sc.sensors.gyro_coarse.validate("spacecraft.sensors.gyro_coarse", e);
  sc.sensors.gyro_fine.validate("spacecraft.sensors.gyro_fine", e);
  sc.sensors.fgs.validate("spacecraft.sensors.fgs", e);
  if (!(sc.sensors.str_blend > 0.0 && sc.sensors.str_blend <= 1.0))
    e.push_back("spacecraft.sensors.str_blend: must lie in (0, 1]");

  {
    std::vector<std::string> oe;
    const auto tel = optics::make_telescope(sc.optics.geometry);
    tel.validate(oe);
    for (auto& m : oe) e.push_back("spacecraft.optics: " + m);
    if (oe.empty()) {
      const auto sens = optics::los_sensitivity(tel);
      for (const auto& [label, value] : sc.optics.misalignment) {
        try {
          sens.index(label);
        } catch (const LabelError&) {
          e.push_back("spacecraft.optics.misalignment: unknown label '" + label + "'");
        }
        if (!std::isfinite(value) || std::abs(value) > optics::kParaxialLimit)
          e.push_back("spacecraft.optics.misalignment." + label + ": must be finite and within the paraxial bound");
      }
    }
  }

  disturbances.orbit.validate(e);
  disturbances.solar.validate(e);
  timeline.validate(e);

  static const char* kWindows[3] = {"control.slew", "control.coarse", "control.fine"};
  for (int w = 0; w < 3; ++w) control.window[static_cast<std::size_t>(w)].validate(kWindows[w], e);
  if (control.window[0].fsm || control.window[1].fsm) e.push_back("control: the FSM loop runs only in the fine window");
  if (!(control.los_integral_gain > 0.0)) e.push_back("control.los_integral_gain: must be positive");
  if (!(control.pma_gain >= 0.0)) e.push_back("control.pma_gain: must be non-negative");
  if (!(control.jump_bound > 0.0)) e.push_back("control.jump_bound: must be positive");
  for (const auto& w : control.window)
    if (w.pma && !sc.payload) e.push_back("control: proof-mass actuators need an isolated payload");

  if (!unit(slew.initial) || !unit(slew.target)) e.push_back("slew: attitudes must be unit quaternions");
  if (!(slew.omega_max > 0.0)) e.push_back("slew.omega_max: must be positive");
  if (!(slew.alpha_max > 0.0)) e.push_back("slew.alpha_max: must be positive");

  if (dt > 0.0) {
    check_rate("solver.log_rate", solver.log_rate, dt, e);
    check_rate("control.rate", control.rate, dt, e);
    check_rate("spacecraft.sensors.star_tracker.rate", sc.sensors.str.rate_hz, dt, e);
    check_rate("spacecraft.sensors.gyro_coarse.rate", sc.sensors.gyro_coarse.rate_hz, dt, e);
    check_rate("spacecraft.sensors.gyro_fine.rate", sc.sensors.gyro_fine.rate_hz, dt, e);
    check_rate("spacecraft.sensors.fgs.rate", sc.sensors.fgs.rate_hz, dt, e);
    if (sc.rcs.prototype.pwm_period > 0.0)
      check_rate("spacecraft.rcs.thruster.pwm_period", 1.0 / sc.rcs.prototype.pwm_period, dt, e);
  }

  for (std::size_t i = 0; i < uncertain.size(); ++i) {
    const auto& u = uncertain[i];
    const std::string p = fmt::format("uncertain[{}]", i);
    u.validate(p, e);
    if (!is_parameter_path(*this, u.path)) e.push_back(p + ".path: unknown parameter '" + u.path + "'");
  }

  // Assembly and step size only make sense once the parts are valid.
  if (e.empty()) {
    try {
      const auto model = structure::assemble(build_structure(*this), sc.theta);
      const double wmax = model.max_frequency();
      if (wmax * dt > kMaxOmegaDt)
        e.push_back(fmt::format("solver.dt: {} s is too large for the fastest mode ({:.4g} rad/s); "
                                "omega*dt must not exceed {} (dt <= {:.4g} s)",
                                dt, wmax, kMaxOmegaDt, kMaxOmegaDt / wmax));
    } catch (const ConfigError& ex) {
      for (const auto& m : ex.messages()) e.push_back("spacecraft: " + m);
    }
  }
  return e;
}

void Scenario::validate() const {
  auto e = validation_errors();
  if (!e.empty()) throw ConfigError(e);
}

namespace {

bool matches(const std::string& pattern, const std::string& name) {
  if (!pattern.empty() && pattern.back() == '*') return name.compare(0, pattern.size() - 1, pattern, 0, pattern.size() - 1) == 0;
  return pattern == name;
}

struct Parsed {
  std::string head, middle, tail;
};

Parsed split(const std::string& path) {
  Parsed p;
  const auto a = path.find('.');
  const auto b = path.rfind('.');
  if (a == std::string::npos) {
    p.head = path;
    return p;
  }
  p.head = path.substr(0, a);
  p.tail = path.substr(b + 1);
  if (b > a) p.middle = path.substr(a + 1, b - a - 1);
  return p;
}

// Applies (or, with s == nullptr semantics via `dry`, only checks) a parameter.
bool apply(Scenario& s, const std::string& path, double v, bool dry) {
  auto& sc = s.spacecraft;
  const Parsed p = split(path);

  if (p.head == "appendage" && (p.tail == "frequency_scale" || p.tail == "damping_scale") && !p.middle.empty()) {
    bool any = false;
    for (auto& a : sc.appendages) {
      if (!matches(p.middle, a.appendage.name)) continue;
      any = true;
      if (dry) continue;
      if (p.tail == "frequency_scale") a.appendage.frequencies *= v;
      else a.appendage.damping *= v;
    }
    return any;
  }
  if (path == "payload.isolator.stiffness_scale" || path == "payload.isolator.damping_scale") {
    if (!sc.payload) return false;
    if (!dry) (p.tail == "stiffness_scale" ? sc.payload->isolator.stiffness : sc.payload->isolator.damping) *= v;
    return true;
  }
  if (path == "wheels.isolator.stiffness_scale" || path == "wheels.isolator.damping_scale") {
    if (!sc.wheels.isolator_stiffness) return false;
    if (!dry) *(p.tail == "stiffness_scale" ? sc.wheels.isolator_stiffness : sc.wheels.isolator_damping) *= v;
    return true;
  }
  if (path == "wheels.static_imbalance") {
    if (!dry) sc.wheels.wheel.static_imbalance = v;
    return true;
  }
  if (path == "wheels.dynamic_imbalance") {
    if (!dry) sc.wheels.wheel.dynamic_imbalance = v;
    return true;
  }
  if (path == "wheels.bias_speed") {
    if (!dry) sc.wheels.bias_speed = v;
    return true;
  }
  if (path == "hub.mass_scale") {
    if (!dry) sc.hub.mass *= v;
    return true;
  }
  if (path == "hub.inertia_scale") {
    if (!dry) sc.hub.inertia *= v;
    return true;
  }
  if (path == "slosh.frequency_scale") {
    if (!sc.slosh) return false;
    if (!dry) sc.slosh->frequency *= v;
    return true;
  }
  if (path == "sadm.amplitude_scale") {
    if (!dry)
      for (auto& h : sc.sadm.harmonics) h.amplitude *= v;
    return true;
  }
  if (path == "sensors.str.noise_scale") {
    if (!dry) sc.sensors.str.noise_std *= v;
    return true;
  }
  if (path == "sensors.fgs.noise_scale") {
    if (!dry) sc.sensors.fgs.noise_std *= v;
    return true;
  }
  return false;
}

}  // namespace

bool is_parameter_path(const Scenario& s, const std::string& path) {
  return apply(const_cast<Scenario&>(s), path, 0.0, true);
}

void apply_parameter(Scenario& s, const std::string& path, double value) {
  if (!std::isfinite(value)) throw ConfigError("parameter " + path + ": value must be finite");
  if (!apply(s, path, value, false)) throw LabelError("unknown scenario parameter '" + path + "'");
}

}  // namespace spcm::mission
