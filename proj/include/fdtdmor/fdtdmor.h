/* Copyright 2026 The fdtdmor Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the fdtdmor library. All objects are opaque handles released with
 * their matching *_free function. Functions return an fdtdmor_status; on failure
 * fdtdmor_last_error() describes the problem (thread-local, valid until the next call
 * on the same thread).
 */

#ifndef FDTDMOR_FDTDMOR_H
#define FDTDMOR_FDTDMOR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FDTDMOR_API __declspec(dllexport)
#else
#define FDTDMOR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fdtdmor_status
{
  FDTDMOR_OK = 0,
  FDTDMOR_ERR_CONFIG = 1,
  FDTDMOR_ERR_DIVERGENCE = 2,
  FDTDMOR_ERR_THRESHOLD = 3,
  FDTDMOR_ERR_INVALID_ARGUMENT = 4,
  FDTDMOR_ERR_SINGULAR = 5,
  FDTDMOR_ERR_SOLVER = 6,
  FDTDMOR_ERR_IO = 7,
  FDTDMOR_ERR_DEGENERATE = 8,
  FDTDMOR_ERR_COMPARISON = 10,
  FDTDMOR_ERR_INTERNAL = 99
} fdtdmor_status;

typedef struct fdtdmor_scenario fdtdmor_scenario;
typedef struct fdtdmor_run_result fdtdmor_run_result;
typedef struct fdtdmor_eigen_result fdtdmor_eigen_result;
typedef struct fdtdmor_compare_report fdtdmor_compare_report;
typedef struct fdtdmor_system fdtdmor_system;
typedef struct fdtdmor_reduced_model fdtdmor_reduced_model;

FDTDMOR_API const char *fdtdmor_version(void);
FDTDMOR_API const char *fdtdmor_last_error(void);
/* Field path of the last configuration error ("" if none). */
FDTDMOR_API const char *fdtdmor_last_error_path(void);
FDTDMOR_API const char *fdtdmor_status_name(fdtdmor_status status);

/* Scenarios */
FDTDMOR_API fdtdmor_status fdtdmor_scenario_load(const char *path, fdtdmor_scenario **out);
FDTDMOR_API fdtdmor_status fdtdmor_scenario_parse(const char *text, fdtdmor_scenario **out);
/* params: n_params "key=value" strings (may be NULL when n_params is 0). */
FDTDMOR_API fdtdmor_status fdtdmor_scenario_generate(const char *template_name,
                                                     const char *const *params, size_t n_params,
                                                     fdtdmor_scenario **out);
/* Number of built-in templates and their names. */
FDTDMOR_API size_t fdtdmor_template_count(void);
FDTDMOR_API const char *fdtdmor_template_name(size_t index);
/* Canonical JSON; the string is owned by the scenario and valid until it changes. */
FDTDMOR_API const char *fdtdmor_scenario_serialize(fdtdmor_scenario *scenario);
FDTDMOR_API uint64_t fdtdmor_scenario_hash(const fdtdmor_scenario *scenario);
FDTDMOR_API fdtdmor_status fdtdmor_scenario_set_output_dir(fdtdmor_scenario *scenario,
                                                           const char *directory);
FDTDMOR_API fdtdmor_status fdtdmor_scenario_set_s_factor(fdtdmor_scenario *scenario, double s);
FDTDMOR_API fdtdmor_status fdtdmor_scenario_set_steps(fdtdmor_scenario *scenario, uint64_t steps);
/* engine: "full" or "reduced" */
FDTDMOR_API fdtdmor_status fdtdmor_scenario_set_engine(fdtdmor_scenario *scenario,
                                                       const char *engine);
FDTDMOR_API void fdtdmor_scenario_free(fdtdmor_scenario *scenario);

/* Pipeline */
FDTDMOR_API fdtdmor_status fdtdmor_run(const fdtdmor_scenario *scenario, int write_outputs,
                                       fdtdmor_run_result **out);
FDTDMOR_API const char *fdtdmor_run_summary(const fdtdmor_run_result *result);
FDTDMOR_API double fdtdmor_run_dt(const fdtdmor_run_result *result);
FDTDMOR_API size_t fdtdmor_run_probe_count(const fdtdmor_run_result *result);
FDTDMOR_API const char *fdtdmor_run_probe_name(const fdtdmor_run_result *result, size_t probe);
FDTDMOR_API size_t fdtdmor_run_step_count(const fdtdmor_run_result *result);
/* Pointer to steps samples of one probe, owned by the result. */
FDTDMOR_API const double *fdtdmor_run_probe_values(const fdtdmor_run_result *result, size_t probe);
FDTDMOR_API size_t fdtdmor_run_resonance_count(const fdtdmor_run_result *result);
FDTDMOR_API double fdtdmor_run_resonance(const fdtdmor_run_result *result, size_t index);
/* Total seconds of the primary engine run (setup + MOR + run). */
FDTDMOR_API double fdtdmor_run_total_seconds(const fdtdmor_run_result *result);
FDTDMOR_API void fdtdmor_run_result_free(fdtdmor_run_result *result);

FDTDMOR_API fdtdmor_status fdtdmor_eigen(const fdtdmor_scenario *scenario, int write_outputs,
                                         fdtdmor_eigen_result **out);
FDTDMOR_API const char *fdtdmor_eigen_summary(const fdtdmor_eigen_result *result);
/* Largest |lambda| of the full system, its enforced form, the reduced model and the
 * enforced reduced model; -1 when not computed. */
FDTDMOR_API double fdtdmor_eigen_max_full(const fdtdmor_eigen_result *result);
FDTDMOR_API double fdtdmor_eigen_max_full_enforced(const fdtdmor_eigen_result *result);
FDTDMOR_API double fdtdmor_eigen_max_reduced(const fdtdmor_eigen_result *result);
FDTDMOR_API double fdtdmor_eigen_max_reduced_enforced(const fdtdmor_eigen_result *result);
FDTDMOR_API void fdtdmor_eigen_result_free(fdtdmor_eigen_result *result);

/* Returns FDTDMOR_OK with a report even when thresholds fail; check
 * fdtdmor_compare_passed. */
FDTDMOR_API fdtdmor_status fdtdmor_compare(const char *reference, const char *candidate,
                                           fdtdmor_compare_report **out);
FDTDMOR_API int fdtdmor_compare_passed(const fdtdmor_compare_report *report);
FDTDMOR_API const char *fdtdmor_compare_text(const fdtdmor_compare_report *report);
FDTDMOR_API void fdtdmor_compare_report_free(fdtdmor_compare_report *report);

/* Low-level access */
FDTDMOR_API fdtdmor_status fdtdmor_system_assemble(const fdtdmor_scenario *scenario,
                                                   fdtdmor_system **out);
FDTDMOR_API size_t fdtdmor_system_num_electric(const fdtdmor_system *system);
FDTDMOR_API size_t fdtdmor_system_num_magnetic(const fdtdmor_system *system);
FDTDMOR_API double fdtdmor_system_cfl_timestep(const fdtdmor_system *system);
FDTDMOR_API fdtdmor_status fdtdmor_system_write_dump(const fdtdmor_system *system,
                                                     const char *directory);
FDTDMOR_API void fdtdmor_system_free(fdtdmor_system *system);

/* Reduces the scenario's system at its s factor (enforcing when due). */
FDTDMOR_API fdtdmor_status fdtdmor_reduce(const fdtdmor_scenario *scenario,
                                          fdtdmor_reduced_model **out);
/* State dimension 2N~ (the scenario's reduction order). */
FDTDMOR_API size_t fdtdmor_reduced_order(const fdtdmor_reduced_model *model);
FDTDMOR_API double fdtdmor_reduced_dt(const fdtdmor_reduced_model *model);
FDTDMOR_API double fdtdmor_reduced_max_singular_value(const fdtdmor_reduced_model *model);
FDTDMOR_API fdtdmor_status fdtdmor_reduced_enforce(fdtdmor_reduced_model *model, double gamma);
FDTDMOR_API fdtdmor_status fdtdmor_reduced_save(const fdtdmor_reduced_model *model, const char *path);
FDTDMOR_API fdtdmor_status fdtdmor_reduced_load(const char *path, fdtdmor_reduced_model **out);
FDTDMOR_API void fdtdmor_reduced_model_free(fdtdmor_reduced_model *model);

#ifdef __cplusplus
}
#endif

#endif /* FDTDMOR_FDTDMOR_H */
