/* C interface to the fish-growth MPC library.
 *
 * All functions returning int use the status codes below; 0 means success.
 * On failure fishmpc_last_error() returns a thread-local message describing
 * what went wrong. Handles are opaque and must be released with the matching
 * _free function. Handle-creating functions return NULL on failure.
 */
#ifndef FISHMPC_H
#define FISHMPC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define FISHMPC_OK 0
#define FISHMPC_ERR_INVALID 1  /* bad argument or handle */
#define FISHMPC_ERR_CONFIG 2  /* config parse/validation failure */
#define FISHMPC_ERR_SOLVER 3  /* optimization or simulation failure */
#define FISHMPC_ERR_IO 4      /* file system failure */

typedef struct fishmpc_config fishmpc_config;
typedef struct fishmpc_model fishmpc_model;

const char* fishmpc_version(void);

/* Thread-local message for the most recent failure in this thread. */
const char* fishmpc_last_error(void);

/* Short name for a status code, e.g. "config". */
const char* fishmpc_status_name(int status);

/* --- configuration ----------------------------------------------------- */

/* Table defaults: 90-day desk comparison, all three controllers, no noise. */
fishmpc_config* fishmpc_config_default(void);

fishmpc_config* fishmpc_config_from_file(const char* path);

/* Dotted key into the JSON layout, e.g. "growth.T_opt" or "experiment.seed".
 * Values are JSON scalars or comma lists ("mpc1,mpc3"). */
int fishmpc_config_set(fishmpc_config* cfg, const char* key, const char* value);

/* Apply FISHMPC_<SECTION>_<FIELD> environment overrides. */
int fishmpc_config_apply_env(fishmpc_config* cfg);

/* Serialized config as pretty JSON; free with fishmpc_string_free. */
char* fishmpc_config_to_json(const fishmpc_config* cfg);

void fishmpc_config_free(fishmpc_config* cfg);
void fishmpc_string_free(char* s);

/* --- experiments --------------------------------------------------------
 * Each writes its artifact files under out_dir (comparison.csv,
 * trajectory_<controller>.csv, report.json; sweep.csv; noise.csv).
 * out_dir NULL uses the config's out_dir. */

int fishmpc_run(const fishmpc_config* cfg, const char* out_dir);

int fishmpc_sweep(const fishmpc_config* cfg, const int* horizons, size_t n_horizons,
                  const char* out_dir);

int fishmpc_noise(const fishmpc_config* cfg, double snr_db, const uint64_t* seeds,
                  size_t n_seeds, const char* out_dir);

/* --- direct model access ------------------------------------------------ */

/* Growth model frozen from a config's parameters. */
fishmpc_model* fishmpc_model_create(const fishmpc_config* cfg);

/* dw/dt in g/day at weight w under feeding rate f, temperature T and
 * dissolved oxygen DO, with the config's ambient ammonia. */
int fishmpc_model_growth_rate(const fishmpc_model* m, double w, double f, double T,
                              double dissolved_oxygen, double* rate_out);

/* Integrate one sampling period from weight w; writes the end weight. */
int fishmpc_model_step(const fishmpc_model* m, double w, double f, double T,
                       double dissolved_oxygen, double* w_out);

void fishmpc_model_free(fishmpc_model* m);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FISHMPC_H */
