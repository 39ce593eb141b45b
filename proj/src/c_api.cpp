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


#include "spcm.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "spcm/error.hpp"
#include "spcm/io/run_artifacts.hpp"
#include "spcm/io/scenario_file.hpp"
#include "spcm/metrics/campaign.hpp"
#include "spcm/metrics/pointing.hpp"
#include "spcm/metrics/waterfall.hpp"
#include "spcm/mission/scenario.hpp"
#include "spcm/mission/simulator.hpp"
#include "spcm/version.hpp"

struct spcm_scenario {
  spcm::io::LoadedScenario loaded;
  bool overridden = false;  // parameters applied after loading
};

struct spcm_result {
  spcm::mission::SimulationResult result;
  std::string report;
};

struct spcm_campaign {
  spcm::metrics::CampaignResult result;
  std::string csv;
  std::string config_hash;
};

namespace {

using namespace spcm;

thread_local std::string g_error;
thread_local std::vector<std::string> g_messages;

spcm_status fail(spcm_status s, const std::string& message, std::vector<std::string> items = {}) {
  g_error = message;
  g_messages = items.empty() ? std::vector<std::string>{message} : std::move(items);
  return s;
}

template <class F>
spcm_status guarded(F&& f) {
  g_error.clear();
  g_messages.clear();
  try {
    return f();
  } catch (const ParseError& e) {
    return fail(SPCM_ERR_PARSE, e.what(), e.messages());
  } catch (const ConfigError& e) {
    return fail(SPCM_ERR_CONFIG, e.what(), e.messages());
  } catch (const IoError& e) {
    return fail(SPCM_ERR_IO, e.what());
  } catch (const DimensionError& e) {
    return fail(SPCM_ERR_DIMENSION, e.what());
  } catch (const LabelError& e) {
    return fail(SPCM_ERR_LABEL, e.what());
  } catch (const AlgebraicLoopError& e) {
    return fail(SPCM_ERR_ALGEBRAIC_LOOP, e.what());
  } catch (const DivergedSimulation& e) {
    return fail(SPCM_ERR_DIVERGED, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SPCM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SPCM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SPCM_ERR_INTERNAL, "unknown error");
  }
}

spcm_status null_arg(const char* what) { return fail(SPCM_ERR_ARGUMENT, std::string(what) + " is null"); }

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size() + 1);
  return p;
}

mission::SimulationOptions options_for(double duration) {
  mission::SimulationOptions o;
  if (duration > 0.0) o.duration = duration;
  return o;
}

spcm_result* make_result(const mission::Scenario& s, mission::SimulationResult r, const std::string& hash) {
  auto* out = new spcm_result{std::move(r), {}};
  out->report = io::report_json(s, out->result, hash);
  return out;
}

}  // namespace

extern "C" {

const char* spcm_version(void) { return spcm::kVersion; }

const char* spcm_status_name(spcm_status status) {
  switch (status) {
    case SPCM_OK: return "ok";
    case SPCM_ERR_ARGUMENT: return "invalid argument";
    case SPCM_ERR_CONFIG: return "configuration error";
    case SPCM_ERR_PARSE: return "parse error";
    case SPCM_ERR_IO: return "I/O error";
    case SPCM_ERR_DIMENSION: return "dimension error";
    case SPCM_ERR_LABEL: return "label error";
    case SPCM_ERR_ALGEBRAIC_LOOP: return "algebraic loop";
    case SPCM_ERR_DIVERGED: return "diverged simulation";
    case SPCM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* spcm_last_error(void) { return g_error.c_str(); }
size_t spcm_last_error_count(void) { return g_messages.size(); }
const char* spcm_last_error_item(size_t index) { return index < g_messages.size() ? g_messages[index].c_str() : nullptr; }
void spcm_string_free(char* s) { std::free(s); }

spcm_status spcm_scenario_load(const char* path, spcm_scenario** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    *out = new spcm_scenario{io::load_scenario_file(path), false};
    return SPCM_OK;
  });
}

void spcm_scenario_free(spcm_scenario* scenario) { delete scenario; }

spcm_status spcm_scenario_name(const spcm_scenario* scenario, const char** name) {
  if (!scenario) return null_arg("scenario");
  if (!name) return null_arg("name");
  *name = scenario->loaded.scenario.name.c_str();
  return SPCM_OK;
}

spcm_status spcm_scenario_seed(const spcm_scenario* scenario, uint64_t* seed) {
  if (!scenario) return null_arg("scenario");
  if (!seed) return null_arg("seed");
  *seed = scenario->loaded.scenario.seed;
  return SPCM_OK;
}

spcm_status spcm_scenario_set_seed(spcm_scenario* scenario, uint64_t seed) {
  if (!scenario) return null_arg("scenario");
  scenario->loaded.scenario.seed = seed;
  return SPCM_OK;
}

spcm_status spcm_scenario_config_hash(const spcm_scenario* scenario, char out[17]) {
  if (!scenario) return null_arg("scenario");
  if (!out) return null_arg("out");
  const std::string h = io::hash_hex(scenario->loaded.config_hash());
  std::memcpy(out, h.c_str(), 17);
  return SPCM_OK;
}

spcm_status spcm_scenario_set_parameter(spcm_scenario* scenario, const char* path, double value) {
  if (!scenario) return null_arg("scenario");
  if (!path) return null_arg("path");
  return guarded([&] {
    auto copy = scenario->loaded.scenario;
    mission::apply_parameter(copy, path, value);
    copy.validate();
    scenario->loaded.scenario = std::move(copy);
    scenario->overridden = true;
    return SPCM_OK;
  });
}

spcm_status spcm_scenario_validate(const spcm_scenario* scenario) {
  if (!scenario) return null_arg("scenario");
  return guarded([&] {
    scenario->loaded.scenario.validate();
    return SPCM_OK;
  });
}

spcm_status spcm_simulate(const spcm_scenario* scenario, double duration, spcm_result** out) {
  if (!scenario) return null_arg("scenario");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const auto& s = scenario->loaded.scenario;
    *out = make_result(s, mission::simulate(s, options_for(duration)), io::hash_hex(scenario->loaded.config_hash()));
    return SPCM_OK;
  });
}

spcm_status spcm_run(const spcm_scenario* scenario, const char* out_dir, double duration, spcm_result** out) {
  if (!scenario) return null_arg("scenario");
  if (!out_dir) return null_arg("out_dir");
  if (out) *out = nullptr;
  if (scenario->overridden)
    return fail(SPCM_ERR_ARGUMENT, "scenario has parameter overrides that the archived file would not reproduce");
  return guarded([&] {
    auto a = io::run(scenario->loaded, out_dir, options_for(duration));
    if (out) {
      auto* r = new spcm_result{std::move(a.result), {}};
      r->report = io::read_text(a.report);
      *out = r;
    }
    return SPCM_OK;
  });
}

void spcm_result_free(spcm_result* result) { delete result; }

int spcm_result_diverged(const spcm_result* r) { return r && r->result.diverged ? 1 : 0; }
double spcm_result_failure_time(const spcm_result* r) { return r ? r->result.failure_time : 0.0; }
int spcm_result_completed(const spcm_result* r) { return r && r->result.score.completed ? 1 : 0; }
double spcm_result_t3(const spcm_result* r) { return r ? r->result.score.t3_achieved : 0.0; }

spcm_status spcm_result_phase(const spcm_result* r, size_t phase, int* reached, double* start, double* end) {
  if (!r) return null_arg("result");
  if (phase >= r->result.score.phases.size()) return fail(SPCM_ERR_ARGUMENT, "phase index out of range");
  const auto& p = r->result.score.phases[phase];
  if (reached) *reached = p.reached ? 1 : 0;
  if (start) *start = p.start;
  if (end) *end = p.end;
  return SPCM_OK;
}

size_t spcm_result_requirement_count(const spcm_result* r) { return r ? r->result.score.verdicts.size() : 0; }

spcm_status spcm_result_requirement(const spcm_result* r, size_t index, const char** name, double* value,
                                    double* threshold, int* evaluated, int* pass) {
  if (!r) return null_arg("result");
  if (index >= r->result.score.verdicts.size()) return fail(SPCM_ERR_ARGUMENT, "requirement index out of range");
  const auto& v = r->result.score.verdicts[index];
  if (name) *name = v.name.c_str();
  if (value) *value = v.value;
  if (threshold) *threshold = v.threshold;
  if (evaluated) *evaluated = v.evaluated ? 1 : 0;
  if (pass) *pass = v.pass ? 1 : 0;
  return SPCM_OK;
}

size_t spcm_result_rows(const spcm_result* r) { return r ? r->result.log.rows() : 0; }
size_t spcm_result_columns(const spcm_result* r) { return r ? r->result.log.width() : 0; }

const char* spcm_result_column_name(const spcm_result* r, size_t column) {
  if (!r || column >= r->result.log.width()) return nullptr;
  return r->result.log.columns()[column].c_str();
}

spcm_status spcm_result_value(const spcm_result* r, size_t row, size_t column, double* value) {
  if (!r) return null_arg("result");
  if (!value) return null_arg("value");
  if (row >= r->result.log.rows() || column >= r->result.log.width())
    return fail(SPCM_ERR_ARGUMENT, "row or column out of range");
  *value = r->result.log.at(row, column);
  return SPCM_OK;
}

size_t spcm_result_event_count(const spcm_result* r) { return r ? r->result.events.size() : 0; }

spcm_status spcm_result_event(const spcm_result* r, size_t index, double* t, const char** type, const char** detail) {
  if (!r) return null_arg("result");
  if (index >= r->result.events.size()) return fail(SPCM_ERR_ARGUMENT, "event index out of range");
  const auto& e = r->result.events[index];
  if (t) *t = e.t;
  if (type) *type = e.type.c_str();
  if (detail) *detail = e.detail.c_str();
  return SPCM_OK;
}

const char* spcm_result_report(const spcm_result* r) { return r ? r->report.c_str() : nullptr; }

spcm_status spcm_score_run(const char* run_dir, int replay, char** report_json, int* replay_identical) {
  if (!run_dir) return null_arg("run_dir");
  if (report_json) *report_json = nullptr;
  return guarded([&] {
    const auto archived = io::open_run(run_dir);
    mission::SimulationResult r;
    r.score = io::rescore(archived);
    if (replay_identical) *replay_identical = 0;
    if (replay) {
      const bool same = io::replay_matches(archived);
      if (replay_identical) *replay_identical = same ? 1 : 0;
    }
    if (report_json) *report_json = dup(io::report_json(archived.scenario.scenario, r, archived.config_hash));
    return SPCM_OK;
  });
}

spcm_status spcm_linearize(const spcm_scenario* scenario, double theta1_deg, double theta2_deg, char** json) {
  if (!scenario) return null_arg("scenario");
  if (!json) return null_arg("json");
  *json = nullptr;
  return guarded([&] {
    if (!std::isfinite(theta1_deg) || !std::isfinite(theta2_deg))
      throw ConfigError("theta: angles must be finite");
    const auto& s = scenario->loaded.scenario;
    const double k = std::numbers::pi / 180.0;
    const auto m = structure::assemble(mission::build_structure(s), {theta1_deg * k, theta2_deg * k});
    *json = dup(io::linearization_json(m));
    return SPCM_OK;
  });
}

void spcm_waterfall_defaults(spcm_waterfall_options* o) {
  if (!o) return;
  *o = spcm_waterfall_options{};
  o->speed_min_hz = 10.0;
  o->speed_max_hz = 60.0;
  o->speed_count = 51;
  o->f_max_hz = 200.0;
  o->resolution_hz = 0.25;
  o->component = 3;
}

spcm_status spcm_waterfall_csv(const spcm_scenario* scenario, const spcm_waterfall_options* o, char** csv) {
  if (!scenario) return null_arg("scenario");
  if (!o) return null_arg("options");
  if (!csv) return null_arg("csv");
  *csv = nullptr;
  return guarded([&] {
    std::vector<std::string> errors;
    if (!(o->speed_min_hz > 0.0) || !(o->speed_max_hz >= o->speed_min_hz))
      errors.push_back("speeds: need 0 < min <= max");
    if (o->speed_count < 1) errors.push_back("speeds: need at least one speed");
    if (o->speed_count == 1 && o->speed_max_hz != o->speed_min_hz) errors.push_back("speeds: one speed needs min == max");
    if (o->component < 0 || o->component > 5) errors.push_back("component: must be 0..5");
    if (o->map < 0 || o->map > 2) errors.push_back("map: must be 0, 1 or 2");
    if (o->wheel >= 4) errors.push_back("wheel: must be 0..3");
    if (!errors.empty()) return fail(SPCM_ERR_ARGUMENT, errors.front(), errors);
    const auto& s = scenario->loaded.scenario;
    metrics::WaterfallOptions w;
    for (std::size_t i = 0; i < o->speed_count; ++i)
      w.speeds_hz.push_back(o->speed_count == 1 ? o->speed_min_hz
                                                : o->speed_min_hz + (o->speed_max_hz - o->speed_min_hz) *
                                                                        static_cast<double>(i) /
                                                                        static_cast<double>(o->speed_count - 1));
    if (o->f_max_hz > 0.0) w.f_max = o->f_max_hz;
    if (o->resolution_hz > 0.0) w.resolution = o->resolution_hz;
    w.wheel = o->wheel;
    w.component = o->component;
    w.gyroscopic = o->gyroscopic != 0;
    const auto map = metrics::waterfall(mission::build_structure(s), s.spacecraft.theta, s.spacecraft.wheels.wheel, w);
    const Eigen::MatrixXd& values = o->map == 0 ? map.transmitted : o->map == 1 ? map.source : map.floor;
    *csv = dup(io::waterfall_csv(map, values));
    return SPCM_OK;
  });
}

spcm_status spcm_metrics_csv(const char* csv_path, const char* columns, double window, double gap,
                             spcm_pointing_metrics* out) {
  if (!csv_path) return null_arg("csv_path");
  if (!out) return null_arg("out");
  return guarded([&] {
    const auto log = io::read_timeseries_csv(csv_path);
    std::vector<std::string> names;
    std::stringstream ss(columns ? columns : "los_x,los_y");
    for (std::string c; std::getline(ss, c, ',');)
      if (!c.empty()) names.push_back(c);
    if (names.empty()) throw ConfigError("columns: at least one column is required");
    metrics::PointingRecord rec;
    rec.sample_rate = log.rate();
    rec.samples.resize(static_cast<Eigen::Index>(log.rows()), static_cast<Eigen::Index>(names.size()));
    for (std::size_t j = 0; j < names.size(); ++j) {
      const auto col = log.column(names[j]);
      for (std::size_t r = 0; r < log.rows(); ++r)
        rec.samples(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = log.at(r, col);
    }
    out->ape = metrics::ape(rec).summary;
    out->rpe = metrics::rpe(rec, window).summary;
    out->pde = metrics::pde(rec, window, gap).summary;
    out->samples = log.rows();
    return SPCM_OK;
  });
}

spcm_status spcm_montecarlo(const spcm_scenario* scenario, size_t runs, uint64_t master_seed, size_t threads,
                            double duration, spcm_progress_fn progress, void* user, spcm_campaign** out) {
  if (!scenario) return null_arg("scenario");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const auto& s = scenario->loaded.scenario;
    if (s.uncertain.empty()) throw ConfigError("uncertain: the scenario lists no uncertain parameters");
    metrics::CampaignProgress cb;
    if (progress) cb = [progress, user](const metrics::RunRecord& r) { progress(r.index, r.score, user); };
    auto* c = new spcm_campaign{metrics::monte_carlo(s, s.uncertain, runs, master_seed, threads, options_for(duration), cb),
                                {}, io::hash_hex(scenario->loaded.config_hash())};
    c->csv = metrics::campaign_csv(c->result);
    *out = c;
    return SPCM_OK;
  });
}

void spcm_campaign_free(spcm_campaign* c) { delete c; }
size_t spcm_campaign_runs(const spcm_campaign* c) { return c ? c->result.runs.size() : 0; }

spcm_status spcm_campaign_score(const spcm_campaign* c, size_t index, double* score) {
  if (!c) return null_arg("campaign");
  if (!score) return null_arg("score");
  if (index >= c->result.runs.size()) return fail(SPCM_ERR_ARGUMENT, "run index out of range");
  *score = c->result.runs[index].score;
  return SPCM_OK;
}

spcm_status spcm_campaign_worst(const spcm_campaign* c, size_t* index, double* score) {
  if (!c) return null_arg("campaign");
  if (c->result.runs.empty()) return fail(SPCM_ERR_ARGUMENT, "campaign has no runs");
  if (index) *index = c->result.summary.worst;
  if (score) *score = c->result.worst().score;
  return SPCM_OK;
}

size_t spcm_campaign_parameter_count(const spcm_campaign* c) { return c ? c->result.parameters.size() : 0; }

spcm_status spcm_campaign_value(const spcm_campaign* c, size_t run, size_t parameter, double* value) {
  if (!c) return null_arg("campaign");
  if (!value) return null_arg("value");
  if (run >= c->result.runs.size() || parameter >= c->result.parameters.size())
    return fail(SPCM_ERR_ARGUMENT, "run or parameter index out of range");
  *value = c->result.runs[run].values[parameter];
  return SPCM_OK;
}

spcm_status spcm_campaign_summary(const spcm_campaign* c, double* mean, double* min, double* max, size_t* diverged) {
  if (!c) return null_arg("campaign");
  const auto& s = c->result.summary;
  if (mean) *mean = s.mean;
  if (min) *min = s.min;
  if (max) *max = s.max;
  if (diverged) *diverged = s.diverged;
  return SPCM_OK;
}

const char* spcm_campaign_csv(const spcm_campaign* c) { return c ? c->csv.c_str() : nullptr; }

spcm_status spcm_campaign_write(const spcm_campaign* c, const char* out_dir) {
  if (!c) return null_arg("campaign");
  if (!out_dir) return null_arg("out_dir");
  return guarded([&] {
    io::write_campaign(c->result, out_dir, c->config_hash);
    return SPCM_OK;
  });
}

}  // extern "C"
