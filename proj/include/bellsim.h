#ifndef BELLSIM_H
#define BELLSIM_H

/*
 * C interface to the bellsim library.
 *
 * Every function that can fail returns a bellsim_status; on any non-OK
 * status, bellsim_last_error() returns a thread-local description of what
 * went wrong. Strings returned through char** out-parameters are owned by
 * the caller and must be released with bellsim_string_free(). Handles are
 * released with their matching *_free() function; all *_free() functions
 * accept NULL.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define BELLSIM_API __declspec(dllexport)
#else
#define BELLSIM_API __attribute__((visibility("default")))
#endif

typedef enum bellsim_status {
  BELLSIM_OK = 0,
  BELLSIM_ERR_INVALID_ARGUMENT = 1,
  /* Detector settings were requested before the ensemble was recorded. */
  BELLSIM_ERR_PHASE_ORDER = 2,
  /* An identity-check run found violations (a report is still produced). */
  BELLSIM_ERR_CHECK_FAILED = 3,
  BELLSIM_ERR_IO = 4,
  BELLSIM_ERR_INTERNAL = 5
} bellsim_status;

typedef enum bellsim_mode {
  BELLSIM_MODE_CONTINUOUS = 0,
  BELLSIM_MODE_DISCRETE = 1
} bellsim_mode;

typedef enum bellsim_lattice {
  BELLSIM_LATTICE_FIBONACCI = 0,
  BELLSIM_LATTICE_OCTAHEDRAL = 1
} bellsim_lattice;

typedef enum bellsim_model {
  BELLSIM_MODEL_LINEAR = 0,
  BELLSIM_MODEL_COSINE = 1
} bellsim_model;

typedef enum bellsim_source {
  BELLSIM_SOURCE_LINEAR = 0,
  BELLSIM_SOURCE_COSINE = 1,
  BELLSIM_SOURCE_EMPIRICAL = 2
} bellsim_source;

typedef struct bellsim_config bellsim_config;
typedef struct bellsim_report bellsim_report;
typedef struct bellsim_experiment bellsim_experiment;

BELLSIM_API const char* bellsim_version(void);

/* Thread-local message for the most recent failure on this thread. */
BELLSIM_API const char* bellsim_last_error(void);

BELLSIM_API void bellsim_string_free(char* s);

/* ---- run configuration ---------------------------------------------- */

/* A fresh configuration: 10^6 trials, seeds 1/1, continuous directions,
 * angles 0,30,...,180 degrees, tie epsilon 0, automatic thread count. */
BELLSIM_API bellsim_config* bellsim_config_new(void);
BELLSIM_API void bellsim_config_free(bellsim_config* cfg);

BELLSIM_API bellsim_status bellsim_config_set_trials(bellsim_config* cfg, uint64_t trials);
BELLSIM_API bellsim_status bellsim_config_set_seeds(bellsim_config* cfg, uint64_t master_seed,
                                                    uint64_t settings_seed);
BELLSIM_API bellsim_status bellsim_config_set_mode(bellsim_config* cfg, bellsim_mode mode);
BELLSIM_API bellsim_status bellsim_config_set_lattice(bellsim_config* cfg,
                                                      bellsim_lattice lattice, uint64_t size);
BELLSIM_API bellsim_status bellsim_config_set_angles(bellsim_config* cfg, const double* deg,
                                                     size_t count);
BELLSIM_API bellsim_status bellsim_config_set_tie_epsilon(bellsim_config* cfg, double epsilon);
/* Worker threads; 0 = hardware concurrency. Never changes any result. */
BELLSIM_API bellsim_status bellsim_config_set_threads(bellsim_config* cfg, unsigned threads);
/* UTC timestamp recorded in the manifest; NULL clears it (the default),
 * which keeps repeat runs byte-identical. */
BELLSIM_API bellsim_status bellsim_config_set_timestamp(bellsim_config* cfg, const char* utc);

/* ---- one-shot runs --------------------------------------------------- */

/* Record an ensemble, estimate the correlation at each configured angle,
 * report it next to both analytic predictions. */
BELLSIM_API bellsim_status bellsim_simulate(const bellsim_config* cfg, bellsim_report** out);

/* Analytic prediction table for the configured angles. */
BELLSIM_API bellsim_status bellsim_predict(const bellsim_config* cfg, bellsim_model model,
                                           bellsim_report** out);

/* Scan coplanar detector settings on a uniform grid of `step_deg` for the
 * largest |CHSH| the source can produce; `refine` enables sub-grid polish
 * (analytic sources only). */
BELLSIM_API bellsim_status bellsim_chsh_scan(const bellsim_config* cfg, bellsim_source source,
                                             double step_deg, int refine,
                                             bellsim_report** out);

/* Re-execute the run described by a previously written output (CSV or JSON
 * text, as produced by this library); the regenerated outputs are
 * byte-identical to the originals. */
BELLSIM_API bellsim_status bellsim_rerun(const char* output_text, bellsim_report** out);

/* ---- reports ---------------------------------------------------------- */

BELLSIM_API void bellsim_report_free(bellsim_report* report);

BELLSIM_API bellsim_status bellsim_report_csv(const bellsim_report* report, char** out);
BELLSIM_API bellsim_status bellsim_report_json(const bellsim_report* report, char** out);

/* Rows in a simulate or predict report (0 for a CHSH report). */
BELLSIM_API bellsim_status bellsim_report_row_count(const bellsim_report* report, size_t* out);

/* Simulate-report row. Any output pointer may be NULL to skip that field. */
BELLSIM_API bellsim_status bellsim_report_row(const bellsim_report* report, size_t index,
                                              double* angle_deg, double* a_dot_b,
                                              double* empirical, double* linear_value,
                                              double* cosine_value, double* std_error,
                                              uint64_t* trials);

/* Predict-report row. */
BELLSIM_API bellsim_status bellsim_report_prediction_row(const bellsim_report* report,
                                                         size_t index, double* angle_deg,
                                                         double* a_dot_b, double* value);

/* CHSH-report numbers. angles_deg is filled with the maximizing settings'
 * station angles (a, a', b, b'); any output pointer may be NULL. */
BELLSIM_API bellsim_status bellsim_report_chsh(const bellsim_report* report, double* value,
                                               double* max_abs, double* combined_std_error,
                                               double angles_deg[4]);

/* ---- algebra identity checks ----------------------------------------- */

/* Runs `cases_per_family` randomized cases of every kernel identity family.
 * On violations the status is BELLSIM_ERR_CHECK_FAILED and, like on success,
 * *out_json (if non-NULL) receives the full JSON report. */
BELLSIM_API bellsim_status bellsim_algebra_check(uint64_t cases_per_family, uint64_t seed,
                                                 double tolerance, char** out_json);

/* ---- staged delayed-choice experiment --------------------------------- */

/* The staged API enforces the protocol's phase order at run time: detector
 * settings can only be chosen once the hidden-direction ensemble is on
 * record, and asking earlier fails with BELLSIM_ERR_PHASE_ORDER. */
BELLSIM_API bellsim_status bellsim_experiment_new(const bellsim_config* cfg,
                                                  bellsim_experiment** out);
BELLSIM_API void bellsim_experiment_free(bellsim_experiment* experiment);

/* Generate and record the full ensemble for the configured trial count. */
BELLSIM_API bellsim_status bellsim_experiment_record(bellsim_experiment* experiment);

/* Choose the canonical coplanar settings pair at angle_deg. */
BELLSIM_API bellsim_status bellsim_experiment_choose_coplanar(bellsim_experiment* experiment,
                                                              double angle_deg);

/* Choose the next independently drawn random settings pair. */
BELLSIM_API bellsim_status bellsim_experiment_choose_random(bellsim_experiment* experiment);

/* Read back the currently chosen settings (either pointer may be NULL). */
BELLSIM_API bellsim_status bellsim_experiment_settings(const bellsim_experiment* experiment,
                                                       double a[3], double b[3]);

/* Estimate the two-station correlation at the chosen settings. */
BELLSIM_API bellsim_status bellsim_experiment_correlation(const bellsim_experiment* experiment,
                                                          double* value, double* std_error);

#ifdef __cplusplus
}
#endif

#endif /* BELLSIM_H */
