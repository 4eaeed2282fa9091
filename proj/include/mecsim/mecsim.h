/* C interface to the mecsim edge-cloud offloading simulator. */
#ifndef MECSIM_H
#define MECSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MECSIM_API __declspec(dllexport)
#else
#define MECSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every fallible call returns one; details via mecsim_last_error(). */
enum {
  MECSIM_OK = 0,
  MECSIM_E_INVALID_ARGUMENT = 1,
  MECSIM_E_INVALID_CONFIG = 2,
  MECSIM_E_IO = 3,
  MECSIM_E_PARSE = 4,
  MECSIM_E_CONTRACT = 5,
  MECSIM_E_INFEASIBLE = 6,
  MECSIM_E_CONSISTENCY = 7,
  MECSIM_E_INTERNAL = 8
};

typedef struct mecsim_config mecsim_config;
typedef struct mecsim_run mecsim_run;

typedef struct mecsim_summary {
  char policy[16];
  int run;
  uint64_t seed;
  int slots;
  double avg_energy;
  double avg_delay_e;
  double avg_delay_c;
  double avg_objective;
  double mean_bound_b;
  double mean_z_backlog;
  int drift_violations;
  double wall_time;
} mecsim_summary;

/* Message of the last failed call on this thread ("" if none). */
MECSIM_API const char* mecsim_last_error(void);
MECSIM_API const char* mecsim_status_string(int status);
MECSIM_API const char* mecsim_version(void);

/* Strings returned through char** are owned by the caller. */
MECSIM_API void mecsim_string_free(char* s);

MECSIM_API int mecsim_config_default(mecsim_config** out);
MECSIM_API int mecsim_config_desk(mecsim_config** out);
/* `base` may be NULL (full default profile). */
MECSIM_API int mecsim_config_from_json(const char* json, const mecsim_config* base,
                                       mecsim_config** out);
MECSIM_API int mecsim_config_from_file(const char* path, const mecsim_config* base,
                                       mecsim_config** out);
/* `json_value` is a JSON literal, e.g. "12", "[1e4,1e6]", "\"RO\"". */
MECSIM_API int mecsim_config_set(mecsim_config* cfg, const char* key, const char* json_value);
MECSIM_API int mecsim_config_to_json(const mecsim_config* cfg, char** out);
MECSIM_API void mecsim_config_free(mecsim_config* cfg);

/* `policies`: comma-separated names, "all", or NULL for the configured policy. */
MECSIM_API int mecsim_run_policies(const mecsim_config* cfg, const char* policies, mecsim_run** out);
MECSIM_API int mecsim_run_count(const mecsim_run* run, size_t* out);
MECSIM_API int mecsim_run_summary(const mecsim_run* run, size_t index, mecsim_summary* out);
MECSIM_API int mecsim_run_slots_csv(const mecsim_run* run, char** out);
/* Writes slots.csv, summary.json and report.md into `dir`. */
MECSIM_API int mecsim_run_write(const mecsim_run* run, const char* dir);
MECSIM_API void mecsim_run_free(mecsim_run* run);

/* Long-form sweep table as CSV. `axis` is one of V, bandwidth, capacity, ud_count. */
MECSIM_API int mecsim_sweep(const mecsim_config* cfg, const char* axis, const double* values,
                            size_t count, int replications, const char* policies, char** csv_out);

/* Report rendered from `dir`/summary.json. */
MECSIM_API int mecsim_report(const char* dir, char** out);

typedef void (*mecsim_criterion_fn)(int id, const char* name, int passed, const char* detail,
                                    double seconds, void* user);

/* Runs the acceptance suite; `failures` receives the number of failed criteria. */
MECSIM_API int mecsim_validate(uint64_t seed, int threads, mecsim_criterion_fn callback,
                               void* user, int* failures);

#ifdef __cplusplus
}
#endif

#endif
