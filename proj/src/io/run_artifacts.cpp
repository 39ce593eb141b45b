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


#include "spcm/io/run_artifacts.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <system_error>

#include <fmt/format.h>
#include <json.hpp>

#include "spcm/error.hpp"
#include "spcm/version.hpp"

namespace spcm::io {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string number(double v, int digits = 0) {
  char buf[40];
  const auto r = digits > 0 ? std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits)
                            : std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

// Splits one CSV line honouring double quotes; returns fields with their 1-based columns.
std::vector<std::pair<std::string, int>> split_csv(const std::string& line) {
  std::vector<std::pair<std::string, int>> out;
  std::string cur;
  int start = 1;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back(cur, start);
      cur.clear();
      start = static_cast<int>(i) + 2;
    } else {
      cur += c;
    }
  }
  out.emplace_back(cur, start);
  return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json read_json(const fs::path& path) {
  const std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

// Where a data file goes inside the run directory, or nothing for absolute references.
std::optional<fs::path> archive_target(const std::string& reference) {
  const fs::path ref(reference);
  if (ref.is_absolute()) return std::nullopt;
  for (const auto& part : ref)
    if (part == "..")
      throw IoError("data file '" + reference + "' lies outside the scenario directory and cannot be archived");
  return ref;
}

}  // namespace

void write_text(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) throw IoError("cannot write " + path.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot write " + path.string() + ": " + ec.message());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ensure_writable_dir(const fs::path& dir) {
  if (dir.empty()) throw IoError("output directory is empty");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  const fs::path probe = dir / ".spcm-write-probe";
  {
    std::ofstream out(probe, std::ios::trunc);
    if (!out || !(out << "probe") || (out.close(), !out))
      throw IoError("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

std::string timeseries_csv(const mission::SignalLog& log) {
  std::string out;
  for (std::size_t c = 0; c < log.width(); ++c) {
    if (c) out += ',';
    out += log.columns()[c];
  }
  out += '\n';
  out.reserve(out.size() + log.rows() * log.width() * 14);
  for (std::size_t r = 0; r < log.rows(); ++r) {
    const auto row = log.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += number(row[c], mission::kLogDigits);
    }
    out += '\n';
  }
  return out;
}

std::string events_csv(const std::vector<mission::Event>& events) {
  std::string out = "t,type,detail\n";
  for (const auto& e : events) out += number(e.t) + "," + csv_field(e.type) + "," + csv_field(e.detail) + "\n";
  return out;
}

std::string report_json(const mission::Scenario& scenario, const mission::SimulationResult& result,
                        const std::string& config_hash) {
  const auto& sc = result.score;
  json j;
  j["schema"] = "spcm-report/1";
  j["scenario"] = scenario.name;
  j["seed"] = scenario.seed;
  j["config_hash"] = config_hash;
  j["diverged"] = result.diverged;
  if (result.diverged) {
    j["failure_time"] = result.failure_time;
    j["failure"] = result.failure;
  }
  json phases = json::array();
  for (const auto& p : sc.phases) {
    json e;
    e["phase"] = std::string(mission::phase_name(p.phase));
    e["reached"] = p.reached;
    if (p.reached) {
      e["start"] = p.start;
      e["end"] = p.end;
    }
    phases.push_back(e);
  }
  j["phases"] = phases;
  json verdicts = json::array();
  for (const auto& v : sc.verdicts) {
    json e;
    e["name"] = v.name;
    e["phase"] = std::string(mission::phase_name(v.phase));
    e["threshold"] = v.threshold;
    e["evaluated"] = v.evaluated;
    if (v.evaluated) {
      e["value"] = v.value;
      e["pass"] = v.pass;
    }
    e["first_violation"] = v.first_violation ? json(*v.first_violation) : json(nullptr);
    verdicts.push_back(e);
  }
  j["requirements"] = verdicts;
  j["t3_achieved"] = sc.t3_achieved;
  j["t3_planned"] = sc.t3_planned;
  j["fraction"] = sc.fraction();
  j["completed"] = sc.completed;
  j["note"] = sc.note;
  json counts = json::object();
  for (const auto& e : result.events) counts[e.type] = counts.value(e.type, 0) + 1;
  j["event_counts"] = counts;
  return j.dump(2) + "\n";
}

mission::SignalLog parse_timeseries_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (columns.empty()) {
      for (const auto& [f, col] : fields) {
        if (f.empty()) throw ParseError(source, line_no, col, "empty column name");
        columns.push_back(f);
      }
      continue;
    }
    if (fields.size() != columns.size())
      throw ParseError(source, line_no, 1,
                       fmt::format("expected {} fields, found {}", columns.size(), fields.size()));
    std::vector<double> row(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto& [f, col] = fields[i];
      const char* b = f.data();
      const char* e = f.data() + f.size();
      while (b < e && *b == ' ') ++b;
      const auto r = std::from_chars(b, e, row[i]);
      if (r.ec != std::errc() || r.ptr != e || !std::isfinite(row[i]))
        throw ParseError(source, line_no, col, "not a finite number: '" + f + "'");
    }
    rows.push_back(std::move(row));
  }
  if (columns.empty()) throw ParseError(source, 1, 1, "missing header row");
  if (rows.size() < 2) throw ParseError(source, line_no, 1, "need at least two samples");
  const double span = rows.back()[0] - rows.front()[0];
  const double dt = span / static_cast<double>(rows.size() - 1);
  if (!(dt > 0.0)) throw ParseError(source, 2, 1, "time column must increase");
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (std::abs(rows[i][0] - rows[i - 1][0] - dt) > 1e-6 * dt)
      throw ParseError(source, static_cast<int>(i) + 2, 1, "time column is not uniformly sampled");
  double rate = 1.0 / dt;
  if (std::abs(rate - std::round(rate)) < 1e-6 * rate) rate = std::round(rate);
  mission::SignalLog log(columns, rate);
  log.reserve(rows.size());
  for (const auto& r : rows) log.append(r);
  return log;
}

mission::SignalLog read_timeseries_csv(const fs::path& path) {
  return parse_timeseries_csv(read_text(path), path.string());
}

RunArtifacts run(const LoadedScenario& loaded, const fs::path& out_dir, const mission::SimulationOptions& options) {
  loaded.scenario.validate();
  std::vector<std::pair<fs::path, const LoadedScenario::DataFile*>> copies;
  for (const auto& f : loaded.data_files)
    if (auto target = archive_target(f.reference)) copies.emplace_back(*target, &f);
  ensure_writable_dir(out_dir);

  RunArtifacts a;
  a.dir = out_dir;
  a.timeseries = out_dir / kTimeseriesFile;
  a.events = out_dir / kEventsFile;
  a.report = out_dir / kReportFile;
  a.manifest = out_dir / kManifestFile;
  a.scenario = out_dir / kScenarioCopy;

  // Archive the inputs first so a bad destination fails before the run.
  write_text(a.scenario, loaded.text);
  json data = json::array();
  for (const auto& [target, f] : copies) {
    const fs::path dest = out_dir / target;
    std::error_code ec;
    if (dest.has_parent_path()) fs::create_directories(dest.parent_path(), ec);
    if (ec) throw IoError("cannot create " + dest.parent_path().string() + ": " + ec.message());
    write_text(dest, f->text);
  }
  for (const auto& f : loaded.data_files) {
    json e;
    e["reference"] = f.reference;
    e["archived"] = archive_target(f.reference).has_value();
    e["hash"] = hash_hex(fnv1a64(f.text));
    data.push_back(e);
  }

  a.result = mission::simulate(loaded.scenario, options);
  const std::string config_hash = hash_hex(loaded.config_hash());
  const std::string ts = timeseries_csv(a.result.log);
  const std::string ev = events_csv(a.result.events);
  const std::string rep = report_json(loaded.scenario, a.result, config_hash);
  write_text(a.timeseries, ts);
  write_text(a.events, ev);
  write_text(a.report, rep);

  json m;
  m["schema"] = "spcm-run/1";
  m["spcm_version"] = kVersion;
  m["scenario"] = kScenarioCopy;
  m["source"] = loaded.path.string();
  m["config_hash"] = config_hash;
  m["seed"] = loaded.scenario.seed;
  m["duration"] = options.duration ? json(*options.duration) : json(nullptr);
  m["data_files"] = data;
  json outputs;
  outputs[kTimeseriesFile] = hash_hex(fnv1a64(ts));
  outputs[kEventsFile] = hash_hex(fnv1a64(ev));
  outputs[kReportFile] = hash_hex(fnv1a64(rep));
  m["outputs"] = outputs;
  write_text(a.manifest, m.dump(2) + "\n");
  return a;
}

ArchivedRun open_run(const fs::path& run_dir) {
  const fs::path manifest = run_dir / kManifestFile;
  if (!fs::exists(manifest)) throw IoError("no " + std::string(kManifestFile) + " in " + run_dir.string());
  const json m = read_json(manifest);
  ArchivedRun r;
  r.dir = run_dir;
  try {
    if (m.at("schema").get<std::string>() != "spcm-run/1")
      throw ConfigError(manifest.string() + ": unsupported schema '" + m.at("schema").get<std::string>() + "'");
    r.config_hash = m.at("config_hash").get<std::string>();
    r.seed = m.at("seed").get<std::uint64_t>();
    if (!m.at("duration").is_null()) r.duration = m.at("duration").get<double>();
    r.scenario = load_scenario_file(run_dir / m.at("scenario").get<std::string>());
  } catch (const json::exception& e) {
    throw ConfigError(manifest.string() + ": " + e.what());
  }
  const std::string actual = hash_hex(r.scenario.config_hash());
  if (actual != r.config_hash)
    throw ConfigError(fmt::format("{}: archived scenario hash {} does not match the manifest ({})", run_dir.string(),
                                  actual, r.config_hash));
  r.scenario.scenario.seed = r.seed;
  return r;
}

mission::MissionScore rescore(const ArchivedRun& run) {
  const auto log = read_timeseries_csv(run.dir / kTimeseriesFile);
  auto score = mission::score_mission(log, run.scenario.scenario.timeline);
  const fs::path events = run.dir / kEventsFile;
  if (fs::exists(events)) {
    std::istringstream in(read_text(events));
    std::string line;
    while (std::getline(in, line)) {
      const auto f = split_csv(line);
      if (f.size() >= 2 && f[1].first == "diverged") {
        score.t3_achieved = 0.0;
        score.note = f.size() >= 3 ? f[2].first : "diverged";
      }
    }
  }
  return score;
}

bool replay_matches(const ArchivedRun& run) {
  mission::SimulationOptions o;
  o.duration = run.duration;
  const auto result = mission::simulate(run.scenario.scenario, o);
  return timeseries_csv(result.log) == read_text(run.dir / kTimeseriesFile);
}

std::string linearization_json(const structure::CoupledLinearModel& model) {
  json j;
  j["schema"] = "spcm-linear-model/1";
  j["theta_deg"] = {model.theta[0] * 180.0 / std::numbers::pi, model.theta[1] * 180.0 / std::numbers::pi};
  json f = json::array();
  for (double w : model.flexible_frequencies()) f.push_back(w / (2.0 * std::numbers::pi));
  j["flexible_frequencies_hz"] = f;
  const auto& ss = model.model;
  j["states"] = ss.state_names();
  j["inputs"] = ss.input_names();
  j["outputs"] = ss.output_names();
  j["A"] = matrix_json(ss.a());
  j["B"] = matrix_json(ss.b());
  j["C"] = matrix_json(ss.c());
  j["D"] = matrix_json(ss.d());
  return j.dump(1) + "\n";
}

std::string waterfall_csv(const metrics::WaterfallMap& map, const Eigen::MatrixXd& values) {
  if (values.rows() != static_cast<Eigen::Index>(map.speeds_hz.size()) ||
      values.cols() != static_cast<Eigen::Index>(map.freqs_hz.size()))
    throw DimensionError("waterfall values do not match the speed and frequency grids");
  std::string out = "speed_hz";
  for (double f : map.freqs_hz) out += "," + number(f);
  out += '\n';
  for (std::size_t i = 0; i < map.speeds_hz.size(); ++i) {
    out += number(map.speeds_hz[i]);
    for (Eigen::Index c = 0; c < values.cols(); ++c) out += "," + number(values(static_cast<Eigen::Index>(i), c));
    out += '\n';
  }
  return out;
}

void write_campaign(const metrics::CampaignResult& result, const fs::path& dir, const std::string& config_hash) {
  ensure_writable_dir(dir);
  write_text(dir / "runs.csv", metrics::campaign_csv(result));
  const auto& s = result.summary;
  json j;
  j["schema"] = "spcm-campaign/1";
  j["config_hash"] = config_hash;
  j["master_seed"] = result.master_seed;
  j["parameters"] = result.parameters;
  j["runs"] = s.runs;
  j["completed"] = s.completed;
  j["diverged"] = s.diverged;
  j["rejected"] = s.failed;
  j["score_mean"] = s.mean;
  j["score_stddev"] = s.stddev;
  j["score_min"] = s.min;
  j["score_p05"] = s.p05;
  j["score_max"] = s.max;
  if (!result.runs.empty()) {
    const auto& w = result.worst();
    json worst;
    worst["index"] = w.index;
    worst["seed"] = w.seed;
    json values;
    for (std::size_t i = 0; i < result.parameters.size() && i < w.values.size(); ++i)
      values[result.parameters[i]] = w.values[i];
    worst["parameters"] = values;
    worst["score"] = w.score;
    worst["failure"] = w.failure;
    j["worst"] = worst;
  }
  write_text(dir / "summary.json", j.dump(2) + "\n");
}

}  // namespace spcm::io
