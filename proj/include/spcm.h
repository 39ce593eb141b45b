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


/*
 * C interface to the SPCM simulator. Objects are opaque handles owned by the
 * caller and released with the matching *_free function. Every fallible call
 * returns an spcm_status; on failure spcm_last_error() describes the problem
 * and spcm_last_error_count()/spcm_last_error_item() list every validation
 * message. Error state is per thread. Strings returned through char** are
 * allocated by the library and released with spcm_string_free.
 */
#ifndef SPCM_H
#define SPCM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SPCM_API __declspec(dllexport)
#else
#define SPCM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spcm_status {
  SPCM_OK = 0,
  SPCM_ERR_ARGUMENT = 1,       /* null handle or out-of-range argument */
  SPCM_ERR_CONFIG = 2,         /* scenario failed validation */
  SPCM_ERR_PARSE = 3,          /* malformed file; message has file:line:col */
  SPCM_ERR_IO = 4,
  SPCM_ERR_DIMENSION = 5,
  SPCM_ERR_LABEL = 6,
  SPCM_ERR_ALGEBRAIC_LOOP = 7,
  SPCM_ERR_DIVERGED = 8,
  SPCM_ERR_INTERNAL = 9
} spcm_status;

typedef struct spcm_scenario spcm_scenario;
typedef struct spcm_result spcm_result;
typedef struct spcm_campaign spcm_campaign;

SPCM_API const char* spcm_version(void);
SPCM_API const char* spcm_status_name(spcm_status status);
SPCM_API const char* spcm_last_error(void);
SPCM_API size_t spcm_last_error_count(void);
SPCM_API const char* spcm_last_error_item(size_t index);
SPCM_API void spcm_string_free(char* s);

/* ---- scenarios ---- */

/* Loads and validates a scenario file (all problems are reported). */
SPCM_API spcm_status spcm_scenario_load(const char* path, spcm_scenario** out);
SPCM_API void spcm_scenario_free(spcm_scenario* scenario);
SPCM_API spcm_status spcm_scenario_name(const spcm_scenario* scenario, const char** name);
SPCM_API spcm_status spcm_scenario_seed(const spcm_scenario* scenario, uint64_t* seed);
SPCM_API spcm_status spcm_scenario_set_seed(spcm_scenario* scenario, uint64_t seed);
/* FNV-1a 64 of the scenario file bytes as 16 hex digits plus terminator.
 * Parameter overrides do not change it. */
SPCM_API spcm_status spcm_scenario_config_hash(const spcm_scenario* scenario, char out[17]);
/* Applies a named scale or value (see the README for paths) and revalidates. */
SPCM_API spcm_status spcm_scenario_set_parameter(spcm_scenario* scenario, const char* path, double value);
SPCM_API spcm_status spcm_scenario_validate(const spcm_scenario* scenario);

/* ---- single runs ---- */

/* duration <= 0 runs the scenario's full timeline. A diverged run is a
 * successful call; query spcm_result_diverged. */
SPCM_API spcm_status spcm_simulate(const spcm_scenario* scenario, double duration, spcm_result** out);
/* Same, writing timeseries.csv, events.csv, report.json, manifest.json and the
 * scenario copy into out_dir. SPCM_ERR_IO before simulating if out_dir cannot
 * be written. `out` may be NULL. */
SPCM_API spcm_status spcm_run(const spcm_scenario* scenario, const char* out_dir, double duration,
                              spcm_result** out);
SPCM_API void spcm_result_free(spcm_result* result);

SPCM_API int spcm_result_diverged(const spcm_result* result);
SPCM_API double spcm_result_failure_time(const spcm_result* result);
SPCM_API int spcm_result_completed(const spcm_result* result);
SPCM_API double spcm_result_t3(const spcm_result* result);
/* phase in 0..5: slew transient, slew steady, coarse transient, coarse steady, fine transient, fine steady. */
SPCM_API spcm_status spcm_result_phase(const spcm_result* result, size_t phase, int* reached, double* start,
                                       double* end);
SPCM_API size_t spcm_result_requirement_count(const spcm_result* result);
SPCM_API spcm_status spcm_result_requirement(const spcm_result* result, size_t index, const char** name,
                                             double* value, double* threshold, int* evaluated, int* pass);
SPCM_API size_t spcm_result_rows(const spcm_result* result);
SPCM_API size_t spcm_result_columns(const spcm_result* result);
SPCM_API const char* spcm_result_column_name(const spcm_result* result, size_t column);
SPCM_API spcm_status spcm_result_value(const spcm_result* result, size_t row, size_t column, double* value);
SPCM_API size_t spcm_result_event_count(const spcm_result* result);
SPCM_API spcm_status spcm_result_event(const spcm_result* result, size_t index, double* t, const char** type,
                                       const char** detail);
/* Structured report (JSON); owned by the result. */
SPCM_API const char* spcm_result_report(const spcm_result* result);

/* ---- archived runs ---- */

/* Rescores run_dir/timeseries.csv against the archived scenario and returns
 * the report JSON. With replay != 0 the run is simulated again and
 * *replay_identical says whether the time series matched byte for byte. */
SPCM_API spcm_status spcm_score_run(const char* run_dir, int replay, char** report_json, int* replay_identical);

/* ---- analysis ---- */

/* State-space model at the given SADM angles (degrees) as JSON. */
SPCM_API spcm_status spcm_linearize(const spcm_scenario* scenario, double theta1_deg, double theta2_deg,
                                    char** json);

typedef struct spcm_waterfall_options {
  double speed_min_hz;
  double speed_max_hz;
  size_t speed_count;
  double f_max_hz;       /* 0 = 200 */
  double resolution_hz;  /* 0 = 0.25 */
  size_t wheel;          /* 0-based */
  int component;         /* 0..5 = fx fy fz tx ty tz in wheel axes */
  int map;               /* 0 transmitted, 1 source, 2 noise floor */
  int gyroscopic;
} spcm_waterfall_options;

SPCM_API void spcm_waterfall_defaults(spcm_waterfall_options* options);
SPCM_API spcm_status spcm_waterfall_csv(const spcm_scenario* scenario, const spcm_waterfall_options* options,
                                        char** csv);

typedef struct spcm_pointing_metrics {
  double ape;  /* max |e| */
  double rpe;  /* max over windows */
  double pde;  /* max over window pairs */
  size_t samples;
} spcm_pointing_metrics;

/* APE/RPE/PDE of the named columns (comma separated; NULL = los_x,los_y) of a
 * time-series CSV. */
SPCM_API spcm_status spcm_metrics_csv(const char* csv_path, const char* columns, double window, double gap,
                                      spcm_pointing_metrics* out);

/* ---- Monte Carlo ---- */

/* Called from worker threads as runs finish. */
typedef void (*spcm_progress_fn)(size_t index, double score, void* user);

/* Samples the scenario's uncertain parameters. threads = 0 uses every core.
 * duration <= 0 runs full missions. */
SPCM_API spcm_status spcm_montecarlo(const spcm_scenario* scenario, size_t runs, uint64_t master_seed,
                                     size_t threads, double duration, spcm_progress_fn progress, void* user,
                                     spcm_campaign** out);
SPCM_API void spcm_campaign_free(spcm_campaign* campaign);
SPCM_API size_t spcm_campaign_runs(const spcm_campaign* campaign);
SPCM_API spcm_status spcm_campaign_score(const spcm_campaign* campaign, size_t index, double* score);
SPCM_API spcm_status spcm_campaign_worst(const spcm_campaign* campaign, size_t* index, double* score);
SPCM_API size_t spcm_campaign_parameter_count(const spcm_campaign* campaign);
SPCM_API spcm_status spcm_campaign_value(const spcm_campaign* campaign, size_t run, size_t parameter,
                                         double* value);
SPCM_API spcm_status spcm_campaign_summary(const spcm_campaign* campaign, double* mean, double* min, double* max,
                                           size_t* diverged);
/* One row per run; owned by the campaign. */
SPCM_API const char* spcm_campaign_csv(const spcm_campaign* campaign);
/* Writes runs.csv and summary.json. */
SPCM_API spcm_status spcm_campaign_write(const spcm_campaign* campaign, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* SPCM_H */
