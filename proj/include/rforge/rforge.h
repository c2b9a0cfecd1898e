/*
 * Copyright 2026 The rforge Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * rforge: workload search for performance anomalies in RDMA subsystems.
 *
 * C interface of the rforge shared library. All functions are thread-safe
 * with respect to distinct handles; one campaign handle must not be used from
 * two threads at once.
 *
 * Error handling: every function returning rforge_status sets a thread-local
 * message on failure, readable with rforge_last_error() until the next call
 * on the same thread. Strings returned through char** out-parameters are
 * owned by the caller and must be released with rforge_string_free().
 */
#ifndef RFORGE_RFORGE_H_
#define RFORGE_RFORGE_H_

#include <stdint.h>

#if defined(_WIN32)
#define RFORGE_API __declspec(dllexport)
#else
#define RFORGE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rforge_status {
  RFORGE_OK = 0,
  /* Malformed input: bad JSON, schema violation, invalid point or config. */
  RFORGE_INVALID_ARGUMENT = 1,
  /* A referenced file does not exist or cannot be read. */
  RFORGE_NOT_FOUND = 2,
  /* The operation cannot run in the current state (e.g. adapter failed to
     start, report requested before the campaign ran). */
  RFORGE_FAILED_PRECONDITION = 3,
  /* The external adapter missed its response deadline. */
  RFORGE_DEADLINE_EXCEEDED = 4,
  /* The external adapter reported an error; partial results were kept. */
  RFORGE_ABORTED = 5,
  /* Writing an output file failed. */
  RFORGE_IO_ERROR = 6,
  RFORGE_INTERNAL = 7
} rforge_status;

/* Verdict of the anomaly monitor for one measurement. */
typedef enum rforge_verdict {
  RFORGE_VERDICT_NONE = 0,
  RFORGE_VERDICT_PAUSE_ANOMALY = 1,
  RFORGE_VERDICT_THROUGHPUT_ANOMALY = 2
} rforge_verdict;

/* Message of the last failed call on this thread ("" if none). Valid until
   the next rforge call on this thread. */
RFORGE_API const char* rforge_last_error(void);

/* Library version, e.g. "1.0.0". Static storage. */
RFORGE_API const char* rforge_version(void);

/* Releases a string returned by this library. NULL is a no-op. */
RFORGE_API void rforge_string_free(char* s);

/* ---- Campaigns ---------------------------------------------------------- */

typedef struct rforge_campaign rforge_campaign;

/* Loads and validates a campaign config file, including the subsystem, rule
   library and known-anomaly files it names. */
RFORGE_API rforge_status rforge_campaign_load(const char* config_path,
                                              rforge_campaign** out);

/* Overrides of the loaded config; call before rforge_campaign_run. */
RFORGE_API rforge_status rforge_campaign_set_seed(rforge_campaign* c,
                                                  uint64_t seed);
RFORGE_API rforge_status rforge_campaign_set_budget(rforge_campaign* c,
                                                    int64_t eval_budget);
RFORGE_API rforge_status rforge_campaign_set_output_dir(rforge_campaign* c,
                                                        const char* dir);

/* Runs the search and writes anomalies.json, report.md, trajectory.csv and
   manifest.json to the output directory. *anomaly_count (may be NULL)
   receives the number of new anomalies. When the tester fails mid-campaign
   the partial results are still written and the tester's status is
   returned. */
RFORGE_API rforge_status rforge_campaign_run(rforge_campaign* c,
                                             int32_t* anomaly_count);

/* The anomalies.json document of the last run. */
RFORGE_API rforge_status rforge_campaign_report_json(const rforge_campaign* c,
                                                     char** out_json);

RFORGE_API void rforge_campaign_free(rforge_campaign* c);

/* ---- One-shot operations ------------------------------------------------ */

/* Evaluates one point against a subsystem (JSON texts) with the simulator;
   rules_json may be NULL for an empty library. *out_json receives the
   Measurement. */
RFORGE_API rforge_status rforge_simulate(const char* point_json,
                                         const char* spec_json,
                                         const char* rules_json, uint64_t seed,
                                         char** out_json);

/* Replays the point file against the subsystem and rule files with the
   default detection policy. rules_path may be NULL. *out_json receives
   {"measurement": ..., "verdict": ...}; *verdict (may be NULL) the
   monitor's decision. */
RFORGE_API rforge_status rforge_replay(const char* point_path,
                                       const char* spec_path,
                                       const char* rules_path,
                                       char** out_json,
                                       rforge_verdict* verdict);

/* Checks a restricted search space file against the minimal feature sets in
   an anomalies.json file. *out_json receives [{"anomaly_id", "point"}] with
   one witness per anomaly the space can still trigger; *witness_count (may
   be NULL) their number. */
RFORGE_API rforge_status rforge_check_space(const char* space_path,
                                            const char* anomalies_path,
                                            char** out_json,
                                            int32_t* witness_count);

/* Writes the reference subsystem, rule library, default search space and a
   campaign config using them into out_dir. */
RFORGE_API rforge_status rforge_gen_defaults(const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* RFORGE_RFORGE_H_ */
