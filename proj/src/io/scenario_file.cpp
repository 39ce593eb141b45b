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


#include "spcm/io/scenario_file.hpp"

#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "spcm/io/appendage_file.hpp"
#include "yaml_util.hpp"

namespace spcm::io {

using namespace detail;
using Eigen::Vector3d;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string read_text(const std::filesystem::path& p, const std::string& what) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + what + " " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Typed field access that records problems and keeps going, so one load
/// reports every error in the file.
class Reader {
public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  std::vector<std::string> errors;

  void keys(const YAML::Node& map, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!map.IsMap()) {
      note(map, path + ": expected a mapping");
      return;
    }
    for (auto it = map.begin(); it != map.end(); ++it) {
      const std::string k = it->first.as<std::string>();
      bool ok = false;
      for (const char* a : allowed) ok = ok || k == a;
      if (!ok) note(it->first, (path.empty() ? "" : path + ": ") + "unknown key '" + k + "'");
    }
  }

  /// Runs `f` on map[key] if present; parse failures are recorded.
  void with(const YAML::Node& map, const char* key, const std::string& path,
            const std::function<void(const YAML::Node&, const std::string&)>& f) {
    if (!map.IsMap()) return;
    const YAML::Node n = map[key];
    if (!n) return;
    const std::string p = path.empty() ? key : path + "." + key;
    try {
      f(n, p);
    } catch (const ConfigError& e) {
      for (const auto& m : e.messages()) errors.push_back(m);
    } catch (const YAML::Exception& e) {
      note(n, p + ": " + e.msg);
    }
  }

  void num(const YAML::Node& map, const char* key, const std::string& path, double& out) {
    with(map, key, path, [&](const YAML::Node& n, const std::string& p) { out = as_double(n, source_, p); });
  }
  void boolean(const YAML::Node& map, const char* key, const std::string& path, bool& out) {
    with(map, key, path, [&](const YAML::Node& n, const std::string& p) { out = as_bool(n, source_, p); });
  }
  void vec3(const YAML::Node& map, const char* key, const std::string& path, Vector3d& out) {
    with(map, key, path, [&](const YAML::Node& n, const std::string& p) { out = as_vector(n, source_, p, 3); });
  }
  /// Angle in radians under `key`, or degrees under `key_deg`.
  void angle(const YAML::Node& map, const std::string& key, const std::string& path, double& out) {
    const std::string deg = key + "_deg";
    if (map.IsMap() && map[key] && map[deg]) note(map[deg], path + ": give either " + key + " or " + deg);
    num(map, key.c_str(), path, out);
    with(map, deg.c_str(), path, [&](const YAML::Node& n, const std::string& p) { out = as_double(n, source_, p) * kDeg; });
  }
  /// 6x6 matrix given as a full matrix or as its 6 diagonal entries.
  structure::Matrix6 matrix6(const YAML::Node& n, const std::string& p) {
    if (n.IsSequence() && n.size() == 6 && n[0].IsScalar()) {
      structure::Matrix6 m = structure::Matrix6::Zero();
      m.diagonal() = as_vector(n, source_, p, 6);
      return m;
    }
    return as_matrix(n, source_, p, 6, 6);
  }
  Eigen::Matrix3d matrix3(const YAML::Node& n, const std::string& p) {
    if (n.IsSequence() && n.size() == 3 && n[0].IsScalar()) return as_vector(n, source_, p, 3).asDiagonal();
    return as_matrix(n, source_, p, 3, 3);
  }

  void note(const YAML::Node& n, const std::string& what) {
    const YAML::Mark m = n.Mark();
    errors.push_back(fmt::format("{}:{}:{}: {}", source_, m.line + 1, m.column + 1, what));
  }
  const std::string& source() const { return source_; }

private:
  std::string source_;
};

Eigen::Matrix3d rotation_from(Reader& r, const YAML::Node& map, const std::string& path) {
  Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
  double about_z = 0.0;
  r.angle(map, "rotation_z", path, about_z);
  rot = Eigen::AngleAxisd(about_z, Vector3d::UnitZ()).toRotationMatrix();
  r.with(map, "orientation", path, [&](const YAML::Node& n, const std::string& p) {
    rot = as_matrix(n, r.source(), p, 3, 3);
    if (!(rot.transpose() * rot).isIdentity(1e-9) || rot.determinant() < 0.0)
      throw ConfigError(p + ": must be a proper rotation matrix");
  });
  return rot;
}

sim::Quaternion attitude_from(Reader& r, const YAML::Node& n, const std::string& p) {
  r.keys(n, p, {"quaternion", "axis", "angle", "angle_deg"});
  sim::Quaternion q = sim::Quaternion::Identity();
  if (n["quaternion"]) {
    r.with(n, "quaternion", p, [&](const YAML::Node& v, const std::string& pp) {
      const Eigen::Vector4d c = as_vector(v, r.source(), pp, 4);
      if (std::abs(c.norm() - 1.0) > 1e-6) throw ConfigError(pp + ": must be a unit quaternion [w, x, y, z]");
      q = sim::Quaternion(c(0), c(1), c(2), c(3)).normalized();
    });
    return q;
  }
  Vector3d axis = Vector3d::UnitZ();
  double angle = 0.0;
  r.vec3(n, "axis", p, axis);
  r.angle(n, "angle", p, angle);
  if (!(axis.norm() > 0.0)) {
    r.errors.push_back(p + ".axis: must be non-zero");
    return q;
  }
  return sim::Quaternion(Eigen::AngleAxisd(angle, axis.normalized()));
}

void read_gains(Reader& r, const YAML::Node& n, const std::string& p, mission::AttitudeGains& g) {
  r.keys(n, p, {"bandwidth", "damping", "rolloff_frequency", "rolloff_damping", "torque_limit"});
  r.num(n, "bandwidth", p, g.bandwidth);
  r.num(n, "damping", p, g.damping);
  r.num(n, "rolloff_frequency", p, g.rolloff_frequency);
  r.num(n, "rolloff_damping", p, g.rolloff_damping);
  r.num(n, "torque_limit", p, g.torque_limit);
}

void read_suite(Reader& r, const YAML::Node& n, const std::string& p, mission::PhaseSuite& s) {
  r.keys(n, p, {"sensors", "actuators", "gains"});
  r.with(n, "sensors", p, [&](const YAML::Node& v, const std::string& pp) {
    if (!v.IsSequence()) throw ConfigError(pp + ": expected a list");
    s.str = s.gyro_coarse = s.gyro_fine = s.fgs = false;
    for (const auto& e : v) {
      const std::string name = as_string(e, r.source(), pp);
      if (name == "str") s.str = true;
      else if (name == "gyro_coarse") s.gyro_coarse = true;
      else if (name == "gyro_fine") s.gyro_fine = true;
      else if (name == "fgs") s.fgs = true;
      else r.note(e, pp + ": unknown sensor '" + name + "' (str, gyro_coarse, gyro_fine, fgs)");
    }
  });
  r.with(n, "actuators", p, [&](const YAML::Node& v, const std::string& pp) {
    if (!v.IsSequence()) throw ConfigError(pp + ": expected a list");
    s.rcs = s.rws = s.fsm = s.pma = false;
    for (const auto& e : v) {
      const std::string name = as_string(e, r.source(), pp);
      if (name == "rcs") s.rcs = true;
      else if (name == "rws") s.rws = true;
      else if (name == "fsm") s.fsm = true;
      else if (name == "pma") s.pma = true;
      else r.note(e, pp + ": unknown actuator '" + name + "' (rcs, rws, fsm, pma)");
    }
  });
  r.with(n, "gains", p, [&](const YAML::Node& v, const std::string& pp) { read_gains(r, v, pp, s.gains); });
}

void read_second_order(Reader& r, const YAML::Node& n, const std::string& p, actuators::SecondOrderSpec& s) {
  r.keys(n, p, {"natural_frequency", "natural_frequency_hz", "damping", "stroke"});
  r.num(n, "natural_frequency", p, s.natural_frequency);
  r.with(n, "natural_frequency_hz", p, [&](const YAML::Node& v, const std::string& pp) {
    s.natural_frequency = 2.0 * std::numbers::pi * as_double(v, r.source(), pp);
  });
  r.num(n, "damping", p, s.damping);
  r.num(n, "stroke", p, s.stroke);
}

void read_wheels(Reader& r, const YAML::Node& n, const std::string& p, mission::WheelAssemblyConfig& w) {
  r.keys(n, p, {"rotor_inertia", "max_torque", "max_momentum", "static_imbalance", "dynamic_imbalance", "dynamic_phase",
                "dynamic_phase_deg", "harmonics", "friction", "stick_band", "spikes", "noise_psd", "cant", "cant_deg",
                "azimuth", "azimuth_deg", "radius", "height", "housing_mass", "housing_inertia", "isolator",
                "bias_speed", "null_gain"});
  auto& wh = w.wheel;
  r.num(n, "rotor_inertia", p, wh.rotor_inertia);
  r.num(n, "max_torque", p, wh.max_torque);
  r.num(n, "max_momentum", p, wh.max_momentum);
  r.num(n, "static_imbalance", p, wh.static_imbalance);
  r.num(n, "dynamic_imbalance", p, wh.dynamic_imbalance);
  r.angle(n, "dynamic_phase", p, wh.dynamic_phase);
  r.with(n, "harmonics", p, [&](const YAML::Node& v, const std::string& pp) {
    if (!v.IsSequence()) throw ConfigError(pp + ": expected a list");
    wh.harmonics.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string hp = fmt::format("{}[{}]", pp, i);
      r.keys(v[i], hp, {"order", "force_coeff", "torque_coeff", "phase", "phase_deg"});
      actuators::HarmonicLine h;
      r.num(v[i], "order", hp, h.order);
      r.num(v[i], "force_coeff", hp, h.force_coeff);
      r.num(v[i], "torque_coeff", hp, h.torque_coeff);
      r.angle(v[i], "phase", hp, h.phase);
      wh.harmonics.push_back(h);
    }
  });
  r.with(n, "friction", p, [&](const YAML::Node& v, const std::string& pp) {
    r.keys(v, pp, {"coulomb", "stiction", "stribeck_rate", "viscous"});
    r.num(v, "coulomb", pp, wh.friction.coulomb);
    r.num(v, "stiction", pp, wh.friction.stiction);
    r.num(v, "stribeck_rate", pp, wh.friction.stribeck_rate);
    r.num(v, "viscous", pp, wh.friction.viscous);
  });
  r.num(n, "stick_band", p, wh.stick_band);
  r.with(n, "spikes", p, [&](const YAML::Node& v, const std::string& pp) {
    r.keys(v, pp, {"rate_per_hour", "amplitude_min", "amplitude_max"});
    r.num(v, "rate_per_hour", pp, wh.spikes.rate_per_hour);
    r.num(v, "amplitude_min", pp, wh.spikes.amplitude_min);
    r.num(v, "amplitude_max", pp, wh.spikes.amplitude_max);
  });
  r.num(n, "noise_psd", p, wh.noise_psd);
  r.angle(n, "cant", p, w.cant);
  const auto azimuth = [&](double scale) {
    return [&, scale](const YAML::Node& v, const std::string& pp) {
      const Eigen::VectorXd a = as_vector(v, r.source(), pp, 4);
      for (int i = 0; i < 4; ++i) w.azimuth[static_cast<std::size_t>(i)] = a(i) * scale;
    };
  };
  r.with(n, "azimuth", p, azimuth(1.0));
  r.with(n, "azimuth_deg", p, azimuth(kDeg));
  r.num(n, "radius", p, w.radius);
  r.num(n, "height", p, w.height);
  r.num(n, "housing_mass", p, w.housing_mass);
  r.vec3(n, "housing_inertia", p, w.housing_inertia);
  r.with(n, "isolator", p, [&](const YAML::Node& v, const std::string& pp) {
    r.keys(v, pp, {"stiffness", "damping"});
    r.with(v, "stiffness", pp, [&](const YAML::Node& m, const std::string& mp) { w.isolator_stiffness = r.matrix6(m, mp); });
    r.with(v, "damping", pp, [&](const YAML::Node& m, const std::string& mp) { w.isolator_damping = r.matrix6(m, mp); });
  });
  r.num(n, "bias_speed", p, w.bias_speed);
  r.num(n, "null_gain", p, w.null_gain);
}

void read_sensors(Reader& r, const YAML::Node& n, const std::string& p, mission::SensorSuiteConfig& s) {
  r.keys(n, p, {"star_tracker", "gyro_coarse", "gyro_fine", "fgs", "str_blend"});
  r.with(n, "star_tracker", p, [&](const YAML::Node& v, const std::string& pp) {
    r.keys(v, pp, {"rate", "latency", "noise_std", "tracking_limit"});
    r.num(v, "rate", pp, s.str.rate_hz);
    r.num(v, "latency", pp, s.str.latency);
    r.vec3(v, "noise_std", pp, s.str.noise_std);
    r.num(v, "tracking_limit", pp, s.str.tracking_limit);
  });
  for (const char* key : {"gyro_coarse", "gyro_fine"}) {
    auto& g = std::string(key) == "gyro_coarse" ? s.gyro_coarse : s.gyro_fine;
    r.with(n, key, p, [&](const YAML::Node& v, const std::string& pp) {
      r.keys(v, pp, {"rate", "latency", "noise_density", "bias", "bias_walk_density", "quantization"});
      r.num(v, "rate", pp, g.rate_hz);
      r.num(v, "latency", pp, g.latency);
      r.num(v, "noise_density", pp, g.noise_density);
      r.vec3(v, "bias", pp, g.bias);
      r.num(v, "bias_walk_density", pp, g.bias_walk_density);
      r.num(v, "quantization", pp, g.quantization);
    });
  }
  r.with(n, "fgs", p, [&](const YAML::Node& v, const std::string& pp) {
    r.keys(v, pp, {"rate", "exposure", "noise_std", "fov_half_angle", "alignment_error"});
    r.num(v, "rate", pp, s.fgs.rate_hz);
    r.num(v, "exposure", pp, s.fgs.exposure);
    r.num(v, "noise_std", pp, s.fgs.noise_std);
    r.num(v, "fov_half_angle", pp, s.fgs.fov_half_angle);
    r.with(v, "alignment_error", pp, [&](const YAML::Node& m, const std::string& mp) {
      s.fgs.alignment_error = as_vector(m, r.source(), mp, 2);
    });
  });
  r.num(n, "str_blend", p, s.str_blend);
}

}  // namespace

std::uint64_t LoadedScenario::config_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    h ^= 0xff;
    h *= 0x100000001b3ull;
  };
  feed(text);
  for (const auto& f : data_files) {
    feed(f.reference);
    feed(f.text);
  }
  return h;
}

std::string hash_hex(std::uint64_t h) { return fmt::format("{:016x}", h); }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

LoadedScenario parse_scenario(const std::string& text, const std::string& source, const std::filesystem::path& base_dir) {
  const YAML::Node root = parse_text(text, source);
  if (!root.IsMap()) fail(root, source, "expected a mapping at top level");
  LoadedScenario out;
  out.text = text;
  mission::Scenario& s = out.scenario;
  Reader r(source);

  r.keys(root, "", {"schema", "name", "seed", "solver", "spacecraft", "disturbances", "fidelity", "timeline", "control",
                    "slew", "uncertain"});
  {
    const YAML::Node schema = require(root, source, "schema");
    if (as_string(schema, source, "schema") != "spcm-scenario/1")
      fail(schema, source, "unsupported schema '" + schema.Scalar() + "' (expected spcm-scenario/1)");
  }
  r.with(root, "name", "", [&](const YAML::Node& n, const std::string& p) { s.name = as_string(n, source, p); });
  r.with(root, "seed", "", [&](const YAML::Node& n, const std::string& p) {
    const long long v = as_int(n, source, p);
    if (v < 0) throw ConfigError(p + ": must be non-negative");
    s.seed = static_cast<std::uint64_t>(v);
  });

  r.with(root, "solver", "", [&](const YAML::Node& n, const std::string& p) {
    r.keys(n, p, {"dt", "log_rate"});
    r.num(n, "dt", p, s.solver.dt);
    r.num(n, "log_rate", p, s.solver.log_rate);
  });

  auto load_body = [&](const YAML::Node& n, const std::string& p) {
    const std::string ref = as_string(n, source, p);
    const std::filesystem::path resolved = base_dir / ref;
    std::string body;
    try {
      body = read_text(resolved, "appendage file");
    } catch (const IoError& e) {
      throw ConfigError(p + ": " + e.what());
    }
    out.data_files.push_back({ref, resolved, body});
    return parse_appendage(body, resolved.string());
  };

  r.with(root, "spacecraft", "", [&](const YAML::Node& sc_node, const std::string& sp) {
    auto& sc = s.spacecraft;
    r.keys(sc_node, sp, {"hub", "appendages", "payload", "slosh", "sadm_angles", "sadm_angles_deg", "wheels", "rcs", "sadm",
                         "fsm", "pma", "sensors", "optics"});
    r.with(sc_node, "hub", sp, [&](const YAML::Node& n, const std::string& p) {
      r.keys(n, p, {"mass", "inertia", "com"});
      r.num(n, "mass", p, sc.hub.mass);
      r.with(n, "inertia", p, [&](const YAML::Node& m, const std::string& mp) { sc.hub.inertia = r.matrix3(m, mp); });
      r.vec3(n, "com", p, sc.hub.com);
    });
    r.with(sc_node, "appendages", sp, [&](const YAML::Node& n, const std::string& p) {
      if (!n.IsSequence()) throw ConfigError(p + ": expected a list");
      for (std::size_t i = 0; i < n.size(); ++i) {
        const YAML::Node a = n[i];
        const std::string ap = fmt::format("{}[{}]", p, i);
        r.keys(a, ap, {"name", "file", "position", "rotation_z", "rotation_z_deg", "orientation", "sadm"});
        structure::AppendageMount m;
        bool loaded = false;
        r.with(a, "file", ap, [&](const YAML::Node& f, const std::string& fp) {
          m.appendage = load_body(f, fp);
          loaded = true;
        });
        if (!a["file"]) r.note(a, ap + ": missing required key 'file'");
        r.with(a, "name", ap, [&](const YAML::Node& f, const std::string& fp) { m.appendage.name = as_string(f, source, fp); });
        r.vec3(a, "position", ap, m.position);
        m.orientation = rotation_from(r, a, ap);
        r.with(a, "sadm", ap, [&](const YAML::Node& j, const std::string& jp) {
          r.keys(j, jp, {"axis", "drive", "compliant"});
          structure::SadmJoint joint;
          r.vec3(j, "axis", jp, joint.axis);
          r.with(j, "drive", jp, [&](const YAML::Node& d, const std::string& dp) {
            const long long v = as_int(d, source, dp);
            if (v < 1 || v > 2) throw ConfigError(dp + ": must be 1 or 2");
            joint.drive = static_cast<std::size_t>(v - 1);
          });
          r.boolean(j, "compliant", jp, joint.compliant);
          if (joint.axis.norm() > 0.0) joint.axis.normalize();
          m.sadm = joint;
        });
        if (loaded) sc.appendages.push_back(m);
      }
    });
    r.with(sc_node, "payload", sp, [&](const YAML::Node& n, const std::string& p) {
      r.keys(n, p, {"file", "isolator"});
      structure::PayloadMount pm;
      r.with(n, "file", p, [&](const YAML::Node& f, const std::string& fp) { pm.body = load_body(f, fp); });
      if (!n["file"]) r.note(n, p + ": missing required key 'file'");
      r.with(n, "isolator", p, [&](const YAML::Node& iso, const std::string& ip) {
        r.keys(iso, ip, {"node", "stiffness", "damping"});
        r.vec3(iso, "node", ip, pm.isolator.node);
        r.with(iso, "stiffness", ip, [&](const YAML::Node& m, const std::string& mp) { pm.isolator.stiffness = r.matrix6(m, mp); });
        r.with(iso, "damping", ip, [&](const YAML::Node& m, const std::string& mp) { pm.isolator.damping = r.matrix6(m, mp); });
      });
      sc.payload = pm;
    });
    r.with(sc_node, "slosh", sp, [&](const YAML::Node& n, const std::string& p) {
      r.keys(n, p, {"mass", "fluid_mass", "frequency", "frequency_hz", "damping", "node", "axis"});
      structure::SloshModel sl;
      r.num(n, "mass", p, sl.mass);
      r.num(n, "fluid_mass", p, sl.fluid_mass);
      r.num(n, "frequency", p, sl.frequency);
      r.with(n, "frequency_hz", p, [&](const YAML::Node& v, const std::string& vp) {
        sl.frequency = 2.0 * std::numbers::pi * as_double(v, source, vp);
      });
      r.num(n, "damping", p, sl.damping);
      r.vec3(n, "node", p, sl.node);
      r.vec3(n, "axis", p, sl.axis);
      sc.slosh = sl;
    });
    const auto angles = [&](double scale) {
      return [&, scale](const YAML::Node& v, const std::string& vp) {
        const Eigen::VectorXd a = as_vector(v, source, vp, 2);
        sc.theta = {a(0) * scale, a(1) * scale};
      };
    };
    r.with(sc_node, "sadm_angles", sp, angles(1.0));
    r.with(sc_node, "sadm_angles_deg", sp, angles(kDeg));
    r.with(sc_node, "wheels", sp, [&](const YAML::Node& n, const std::string& p) { read_wheels(r, n, p, sc.wheels); });
    r.with(sc_node, "rcs", sp, [&](const YAML::Node& n, const std::string& p) {
      r.keys(n, p, {"thrust", "mib", "pwm_period", "delay_on", "delay_off", "quantum", "half_size", "lever"});
      auto& t = sc.rcs.prototype;
      r.num(n, "thrust", p, t.thrust);
      r.num(n, "mib", p, t.mib);
      r.num(n, "pwm_period", p, t.pwm_period);
      r.num(n, "delay_on", p, t.delay_on);
      r.num(n, "delay_off", p, t.delay_off);
      r.num(n, "quantum", p, t.quantum);
      r.num(n, "half_size", p, sc.rcs.half_size);
      r.num(n, "lever", p, sc.rcs.lever);
    });
    r.with(sc_node, "sadm", sp, [&](const YAML::Node& n, const std::string& p) {
      r.keys(n, p, {"step_rate", "rotation_rate", "stiffness", "damping", "harmonics"});
      r.num(n, "step_rate", p, sc.sadm.step_rate);
      r.num(n, "rotation_rate", p, sc.sadm.rotation_rate);
      r.num(n, "stiffness", p, sc.sadm.stiffness);
      r.num(n, "damping", p, sc.sadm.damping);
      r.with(n, "harmonics", p, [&](const YAML::Node& v, const std::string& hp) {
        if (!v.IsSequence()) throw ConfigError(hp + ": expected a list");
        sc.sadm.harmonics.clear();
        for (std::size_t i = 0; i < v.size(); ++i) {
          const std::string ip = fmt::format("{}[{}]", hp, i);
          r.keys(v[i], ip, {"order", "amplitude", "phase", "phase_deg"});
          actuators::SadmHarmonic h;
          r.num(v[i], "order", ip, h.order);
          r.num(v[i], "amplitude", ip, h.amplitude);
          r.angle(v[i], "phase", ip, h.phase);
          sc.sadm.harmonics.push_back(h);
        }
      });
    });
    r.with(sc_node, "fsm", sp, [&](const YAML::Node& n, const std::string& p) { read_second_order(r, n, p, sc.fsm); });
    r.with(sc_node, "pma", sp, [&](const YAML::Node& n, const std::string& p) { read_second_order(r, n, p, sc.pma); });
    r.with(sc_node, "sensors", sp, [&](const YAML::Node& n, const std::string& p) { read_sensors(r, n, p, sc.sensors); });
    r.with(sc_node, "optics", sp, [&](const YAML::Node& n, const std::string& p) {
      r.keys(n, p, {"m1_focal", "m2_focal", "separation", "fsm_fraction", "misalignment"});
      r.num(n, "m1_focal", p, sc.optics.geometry.m1_focal);
      r.num(n, "m2_focal", p, sc.optics.geometry.m2_focal);
      r.num(n, "separation", p, sc.optics.geometry.separation);
      r.num(n, "fsm_fraction", p, sc.optics.geometry.fsm_fraction);
      r.with(n, "misalignment", p, [&](const YAML::Node& m, const std::string& mp) {
        if (!m.IsMap()) throw ConfigError(mp + ": expected a mapping of label: value");
        for (auto it = m.begin(); it != m.end(); ++it) {
          const std::string label = it->first.as<std::string>();
          sc.optics.misalignment.emplace_back(label, as_double(it->second, source, mp + "." + label));
        }
      });
    });
  });

  r.with(root, "disturbances", "", [&](const YAML::Node& n, const std::string& p) {
    r.keys(n, p, {"orbit", "gravity_gradient", "solar"});
    r.with(n, "orbit", p, [&](const YAML::Node& o, const std::string& op) {
      r.keys(o, op, {"rate", "phase", "phase_deg"});
      r.num(o, "rate", op, s.disturbances.orbit.rate);
      r.angle(o, "phase", op, s.disturbances.orbit.phase);
    });
    r.boolean(n, "gravity_gradient", p, s.disturbances.gravity_gradient);
    r.with(n, "solar", p, [&](const YAML::Node& o, const std::string& op) {
      r.keys(o, op, {"bias", "amplitude", "phase", "phase_deg"});
      r.with(o, "bias", op, [&](const YAML::Node& v, const std::string& vp) { s.disturbances.solar.bias = as_vector(v, source, vp, 6); });
      r.with(o, "amplitude", op, [&](const YAML::Node& v, const std::string& vp) {
        s.disturbances.solar.amplitude = as_vector(v, source, vp, 6);
      });
      r.angle(o, "phase", op, s.disturbances.solar.phase);
    });
  });

  r.with(root, "fidelity", "", [&](const YAML::Node& n, const std::string& p) {
    r.keys(n, p, {"imbalances", "friction", "spikes", "microstepping", "pwm", "sloshing", "wheel_noise", "sensor_noise"});
    auto& f = s.fidelity;
    r.boolean(n, "imbalances", p, f.imbalances);
    r.boolean(n, "friction", p, f.friction);
    r.boolean(n, "spikes", p, f.spikes);
    r.boolean(n, "microstepping", p, f.microstepping);
    r.boolean(n, "pwm", p, f.pwm);
    r.boolean(n, "sloshing", p, f.sloshing);
    r.boolean(n, "wheel_noise", p, f.wheel_noise);
    r.boolean(n, "sensor_noise", p, f.sensor_noise);
  });

  r.with(root, "timeline", "", [&](const YAML::Node& n, const std::string& p) {
    r.keys(n, p, {"t1", "t2", "t3", "dwell", "total", "requirements"});
    auto& t = s.timeline;
    r.num(n, "t1", p, t.t1);
    r.num(n, "t2", p, t.t2);
    r.num(n, "t3", p, t.t3);
    r.num(n, "dwell", p, t.dwell);
    r.num(n, "total", p, t.total);
    r.with(n, "requirements", p, [&](const YAML::Node& q, const std::string& qp) {
      r.keys(q, qp, {"ape1", "ape2", "rpe2", "window2", "ape3", "rpe3", "pde3", "window3", "gap3"});
      auto& req = t.req;
      r.num(q, "ape1", qp, req.ape1);
      r.num(q, "ape2", qp, req.ape2);
      r.num(q, "rpe2", qp, req.rpe2);
      r.num(q, "window2", qp, req.window2);
      r.num(q, "ape3", qp, req.ape3);
      r.num(q, "rpe3", qp, req.rpe3);
      r.num(q, "pde3", qp, req.pde3);
      r.num(q, "window3", qp, req.window3);
      r.num(q, "gap3", qp, req.gap3);
    });
  });

  r.with(root, "control", "", [&](const YAML::Node& n, const std::string& p) {
    r.keys(n, p, {"rate", "los_integral_gain", "pma_gain", "jump_bound", "slew", "coarse", "fine"});
    auto& c = s.control;
    r.num(n, "rate", p, c.rate);
    r.num(n, "los_integral_gain", p, c.los_integral_gain);
    r.num(n, "pma_gain", p, c.pma_gain);
    r.num(n, "jump_bound", p, c.jump_bound);
    const char* names[3] = {"slew", "coarse", "fine"};
    for (std::size_t w = 0; w < 3; ++w)
      r.with(n, names[w], p, [&](const YAML::Node& v, const std::string& vp) { read_suite(r, v, vp, c.window[w]); });
  });

  r.with(root, "slew", "", [&](const YAML::Node& n, const std::string& p) {
    r.keys(n, p, {"initial", "target", "omega_max", "omega_max_deg", "alpha_max", "alpha_max_deg"});
    r.with(n, "initial", p, [&](const YAML::Node& v, const std::string& vp) { s.slew.initial = attitude_from(r, v, vp); });
    r.with(n, "target", p, [&](const YAML::Node& v, const std::string& vp) { s.slew.target = attitude_from(r, v, vp); });
    r.angle(n, "omega_max", p, s.slew.omega_max);
    r.angle(n, "alpha_max", p, s.slew.alpha_max);
  });

  r.with(root, "uncertain", "", [&](const YAML::Node& n, const std::string& p) {
    if (!n.IsSequence()) throw ConfigError(p + ": expected a list");
    for (std::size_t i = 0; i < n.size(); ++i) {
      const std::string up = fmt::format("{}[{}]", p, i);
      r.keys(n[i], up, {"path", "nominal", "min", "max", "law"});
      metrics::UncertainParameter u;
      r.with(n[i], "path", up, [&](const YAML::Node& v, const std::string& vp) { u.path = as_string(v, source, vp); });
      r.num(n[i], "nominal", up, u.nominal);
      r.num(n[i], "min", up, u.min);
      r.num(n[i], "max", up, u.max);
      r.with(n[i], "law", up, [&](const YAML::Node& v, const std::string& vp) {
        const std::string law = as_string(v, source, vp);
        if (law == "uniform") u.law = metrics::SamplingLaw::Uniform;
        else if (law == "truncated_normal") u.law = metrics::SamplingLaw::TruncatedNormal;
        else throw ConfigError(vp + ": unknown law '" + law + "' (uniform, truncated_normal)");
      });
      s.uncertain.push_back(u);
    }
  });

  std::vector<std::string> errors = std::move(r.errors);
  for (auto& e : s.validation_errors()) errors.push_back(e);
  if (!errors.empty()) throw ConfigError(errors);
  return out;
}

LoadedScenario load_scenario_file(const std::filesystem::path& path) {
  const std::string text = read_text(path, "scenario");
  LoadedScenario out = parse_scenario(text, path.string(), path.parent_path());
  out.path = path;
  return out;
}

mission::Scenario load_scenario(const std::filesystem::path& path) { return load_scenario_file(path).scenario; }

}  // namespace spcm::io
