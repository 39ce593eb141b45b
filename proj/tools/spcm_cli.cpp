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


// spcm: command-line front end. Talks to the simulator only through spcm.h.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spcm.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitUsage = 64;

int report_error(spcm_status s) {
  const std::size_t n = spcm_last_error_count();
  if (n == 0) {
    std::cerr << "spcm: " << spcm_status_name(s) << "\n";
  } else {
    for (std::size_t i = 0; i < n; ++i) std::cerr << "spcm: " << spcm_last_error_item(i) << "\n";
  }
  return (s == SPCM_ERR_CONFIG || s == SPCM_ERR_PARSE) ? kExitValidation : kExitRuntime;
}

struct Scenario {
  spcm_scenario* h = nullptr;
  ~Scenario() { spcm_scenario_free(h); }
};

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { spcm_string_free(s); }
};

std::string default_out(const std::string& leaf) {
  const char* env = std::getenv("SPCM_OUT_DIR");
  const std::filesystem::path base = (env && *env) ? env : "spcm-out";
  return (base / leaf).string();
}

// Writes to a file, or standard output when the path is empty.
bool emit(const std::string& path, const char* text) {
  if (path.empty()) {
    std::cout << text;
    return true;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) {
    std::cerr << "spcm: cannot write " << path << "\n";
    return false;
  }
  return true;
}

int load(const std::string& path, Scenario& s) {
  const spcm_status st = spcm_scenario_load(path.c_str(), &s.h);
  return st == SPCM_OK ? kExitOk : report_error(st);
}

const char* const kPhaseNames[6] = {"slew transient", "slew steady", "coarse transient",
                                    "coarse steady", "fine transient", "fine steady"};

void print_result(const spcm_result* r) {
  for (std::size_t p = 0; p < 6; ++p) {
    int reached = 0;
    double start = 0, end = 0;
    spcm_result_phase(r, p, &reached, &start, &end);
    if (reached)
      std::printf("  %-17s %9.2f .. %9.2f s\n", kPhaseNames[p], start, end);
    else
      std::printf("  %-17s not reached\n", kPhaseNames[p]);
  }
  for (std::size_t i = 0; i < spcm_result_requirement_count(r); ++i) {
    const char* name = nullptr;
    double value = 0, thr = 0;
    int evaluated = 0, pass = 0;
    spcm_result_requirement(r, i, &name, &value, &thr, &evaluated, &pass);
    if (evaluated)
      std::printf("  %-5s %.4e (limit %.1e) %s\n", name, value, thr, pass ? "pass" : "FAIL");
    else
      std::printf("  %-5s not evaluated\n", name);
  }
  std::printf("  t3 achieved %.2f s\n", spcm_result_t3(r));
  if (spcm_result_diverged(r)) std::printf("  diverged at t=%.3f s\n", spcm_result_failure_time(r));
}

int component_index(const std::string& c) {
  static const char* names[6] = {"fx", "fy", "fz", "tx", "ty", "tz"};
  for (int i = 0; i < 6; ++i)
    if (c == names[i]) return i;
  return -1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Satellite pointing and control benchmark simulator"};
  app.set_version_flag("--version", std::string(spcm_version()));
  app.require_subcommand(1);
  app.fallthrough(false);

  std::string scenario_path, out, run_dir, csv_path, theta = "0,0", speeds, columns = "los_x,los_y";
  std::string component = "tx", map = "transmitted";
  std::optional<std::uint64_t> seed;
  double duration = 0.0, window = 1.0, gap = 10.0, fmax = 200.0, resolution = 0.25;
  std::size_t runs = 50, threads = 0, wheel = 1;
  bool replay = false, gyroscopic = false, quiet = false;

  auto* validate = app.add_subcommand("validate", "Load and validate a scenario");
  validate->add_option("scenario", scenario_path, "Scenario file")->required();

  auto* simulate = app.add_subcommand("simulate", "Run one mission and write its artifacts");
  simulate->add_option("scenario", scenario_path, "Scenario file")->required();
  simulate->add_option("-o,--out", out, "Output directory (default $SPCM_OUT_DIR/<name>)");
  simulate->add_option("--seed", seed, "Override the scenario seed");
  simulate->add_option("--duration", duration, "Stop after this many seconds")->check(CLI::PositiveNumber);

  auto* linearize = app.add_subcommand("linearize", "Export the linear structural model");
  linearize->add_option("scenario", scenario_path, "Scenario file")->required();
  linearize->add_option("--theta", theta, "SADM angles in degrees, 'a,b'");
  linearize->add_option("-o,--out", out, "Output JSON file (default standard output)");

  auto* waterfall = app.add_subcommand("waterfall", "Wheel microvibration waterfall map");
  waterfall->add_option("scenario", scenario_path, "Scenario file")->required();
  waterfall->add_option("--speeds", speeds, "Wheel speed grid in Hz, 'min:max:count'")->required();
  waterfall->add_option("-o,--out", out, "Output CSV (default standard output)");
  waterfall->add_option("--fmax", fmax, "Highest frequency, Hz")->check(CLI::PositiveNumber);
  waterfall->add_option("--resolution", resolution, "Frequency bin, Hz")->check(CLI::PositiveNumber);
  waterfall->add_option("--wheel", wheel, "Wheel 1..4")->check(CLI::Range(1, 4));
  waterfall->add_option("--component", component, "Mount wrench component")
      ->check(CLI::IsMember({"fx", "fy", "fz", "tx", "ty", "tz"}));
  waterfall->add_option("--map", map, "Which map")->check(CLI::IsMember({"transmitted", "source", "floor"}));
  waterfall->add_flag("--gyroscopic", gyroscopic, "Include rotor gyroscopic coupling on the isolator");

  auto* mc = app.add_subcommand("montecarlo", "Monte Carlo campaign over the scenario's uncertain parameters");
  mc->add_option("scenario", scenario_path, "Scenario file")->required();
  mc->add_option("-n,--runs", runs, "Number of runs")->check(CLI::PositiveNumber);
  mc->add_option("--seed", seed, "Master seed (default the scenario seed)");
  mc->add_option("--threads", threads, "Worker threads, 0 = all cores");
  mc->add_option("--duration", duration, "Shorten each run to this many seconds")->check(CLI::PositiveNumber);
  mc->add_option("-o,--out", out, "Output directory (default $SPCM_OUT_DIR/<name>-montecarlo)");
  mc->add_flag("-q,--quiet", quiet, "No per-run progress");

  auto* metrics = app.add_subcommand("metrics", "APE, RPE and PDE of a time-series CSV");
  metrics->add_option("csv", csv_path, "Time-series CSV, first column time")->required();
  metrics->add_option("--window", window, "Window length, s")->check(CLI::PositiveNumber);
  metrics->add_option("--gap", gap, "PDE window separation, s")->check(CLI::NonNegativeNumber);
  metrics->add_option("--columns", columns, "Comma-separated error columns");

  auto* score = app.add_subcommand("score", "Rescore an archived run directory");
  score->add_option("run_dir", run_dir, "Directory written by simulate")->required();
  score->add_flag("--replay", replay, "Simulate again and compare the time series byte for byte");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "spcm: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  if (validate->parsed()) {
    Scenario s;
    if (int rc = load(scenario_path, s)) return rc;
    const char* name = nullptr;
    char hash[17];
    spcm_scenario_name(s.h, &name);
    spcm_scenario_config_hash(s.h, hash);
    std::printf("%s: valid (scenario '%s', config %s)\n", scenario_path.c_str(), name, hash);
    return kExitOk;
  }

  if (simulate->parsed()) {
    Scenario s;
    if (int rc = load(scenario_path, s)) return rc;
    if (seed) spcm_scenario_set_seed(s.h, *seed);
    const char* name = nullptr;
    spcm_scenario_name(s.h, &name);
    if (out.empty()) out = default_out(name);
    spcm_result* r = nullptr;
    const spcm_status st = spcm_run(s.h, out.c_str(), duration, &r);
    if (st != SPCM_OK) return report_error(st);
    std::printf("%s -> %s\n", scenario_path.c_str(), out.c_str());
    print_result(r);
    const bool diverged = spcm_result_diverged(r) != 0;
    spcm_result_free(r);
    return diverged ? kExitRuntime : kExitOk;
  }

  if (linearize->parsed()) {
    double a = 0, b = 0;
    char comma = 0;
    std::istringstream in(theta);
    if (!(in >> a >> comma >> b) || comma != ',' || !(in >> std::ws).eof()) {
      std::cerr << "spcm: --theta expects 'deg,deg', got '" << theta << "'\n\n" << linearize->help();
      return kExitUsage;
    }
    Scenario s;
    if (int rc = load(scenario_path, s)) return rc;
    OwnedString json;
    const spcm_status st = spcm_linearize(s.h, a, b, &json.s);
    if (st != SPCM_OK) return report_error(st);
    return emit(out, json.s) ? kExitOk : kExitRuntime;
  }

  if (waterfall->parsed()) {
    spcm_waterfall_options o;
    spcm_waterfall_defaults(&o);
    char c1 = 0, c2 = 0;
    std::istringstream in(speeds);
    if (!(in >> o.speed_min_hz >> c1 >> o.speed_max_hz >> c2 >> o.speed_count) || c1 != ':' || c2 != ':' ||
        !(in >> std::ws).eof()) {
      std::cerr << "spcm: --speeds expects 'min:max:count', got '" << speeds << "'\n\n" << waterfall->help();
      return kExitUsage;
    }
    o.f_max_hz = fmax;
    o.resolution_hz = resolution;
    o.wheel = wheel - 1;
    o.component = component_index(component);
    o.map = map == "transmitted" ? 0 : map == "source" ? 1 : 2;
    o.gyroscopic = gyroscopic ? 1 : 0;
    Scenario s;
    if (int rc = load(scenario_path, s)) return rc;
    OwnedString csv;
    const spcm_status st = spcm_waterfall_csv(s.h, &o, &csv.s);
    if (st != SPCM_OK) return report_error(st);
    return emit(out, csv.s) ? kExitOk : kExitRuntime;
  }

  if (mc->parsed()) {
    Scenario s;
    if (int rc = load(scenario_path, s)) return rc;
    std::uint64_t master = 0;
    spcm_scenario_seed(s.h, &master);
    if (seed) master = *seed;
    const char* name = nullptr;
    spcm_scenario_name(s.h, &name);
    if (out.empty()) out = default_out(std::string(name) + "-montecarlo");
    spcm_progress_fn progress = nullptr;
    if (!quiet)
      progress = [](std::size_t index, double score, void*) {
        std::fprintf(stderr, "run %zu: t3 %.2f s\n", index, score);
      };
    spcm_campaign* c = nullptr;
    spcm_status st = spcm_montecarlo(s.h, runs, master, threads, duration, progress, nullptr, &c);
    if (st != SPCM_OK) return report_error(st);
    st = spcm_campaign_write(c, out.c_str());
    if (st != SPCM_OK) {
      spcm_campaign_free(c);
      return report_error(st);
    }
    double mean = 0, mn = 0, mx = 0;
    std::size_t diverged = 0, worst = 0;
    double worst_score = 0;
    spcm_campaign_summary(c, &mean, &mn, &mx, &diverged);
    spcm_campaign_worst(c, &worst, &worst_score);
    std::printf("%zu runs, master seed %llu -> %s\n", spcm_campaign_runs(c), static_cast<unsigned long long>(master),
                out.c_str());
    std::printf("  t3 mean %.2f s, min %.2f s, max %.2f s, diverged %zu\n", mean, mn, mx, diverged);
    std::printf("  worst run %zu (t3 %.2f s):", worst, worst_score);
    for (std::size_t k = 0; k < spcm_campaign_parameter_count(c); ++k) {
      double v = 0;
      spcm_campaign_value(c, worst, k, &v);
      std::printf(" %.6g", v);
    }
    std::printf("\n");
    spcm_campaign_free(c);
    return kExitOk;
  }

  if (metrics->parsed()) {
    spcm_pointing_metrics m{};
    const spcm_status st = spcm_metrics_csv(csv_path.c_str(), columns.c_str(), window, gap, &m);
    if (st != SPCM_OK) return report_error(st);
    std::printf("samples %zu\nAPE %.6g\nRPE %.6g\nPDE %.6g\n", m.samples, m.ape, m.rpe, m.pde);
    return kExitOk;
  }

  if (score->parsed()) {
    OwnedString json;
    int same = 0;
    const spcm_status st = spcm_score_run(run_dir.c_str(), replay ? 1 : 0, &json.s, &same);
    if (st != SPCM_OK) return report_error(st);
    std::cout << json.s;
    if (replay) {
      std::cerr << (same ? "replay: identical\n" : "replay: DIFFERS\n");
      if (!same) return kExitRuntime;
    }
    return kExitOk;
  }
  return kExitUsage;
}
