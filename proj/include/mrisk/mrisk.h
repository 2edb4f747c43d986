/* Copyright 2026 The mrisk Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the risk engine. Every function returns an mrisk_status;
 * on failure mrisk_last_error() holds a one-line message for the calling thread.
 * Strings returned through char** are owned by the caller and released with
 * mrisk_string_free.
 */
#ifndef MRISK_MRISK_H
#define MRISK_MRISK_H

#include <stddef.h>
#include <stdint.h>

#if defined(MRISK_BUILDING_LIBRARY)
#define MRISK_API __attribute__((visibility("default")))
#else
#define MRISK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mrisk_status {
  MRISK_OK = 0,
  MRISK_E_INVALID_ARGUMENT = 1,
  MRISK_E_SPACE_MISMATCH = 2,
  MRISK_E_TAIL_UNDEFINED = 3,
  MRISK_E_NEGATIVE_COEFFICIENT = 4,
  MRISK_E_UNSUPPORTED_COMBINATION = 5,
  MRISK_E_UNSUPPORTED = 6,
  MRISK_E_NOT_FINITE = 7,
  MRISK_E_NUMERICAL_BREAKDOWN = 8,
  MRISK_E_BRACKET_FAILURE = 9,
  MRISK_E_EMPTY_FAMILY = 10,
  MRISK_E_SINGULAR_MEMBER = 11,
  MRISK_E_INCONSISTENT_ROUTES = 12,
  MRISK_E_NO_MAXIMIZER = 13,
  MRISK_E_CONFIG = 14,
  MRISK_E_NULL_POINTER = 100,
  MRISK_E_OUT_OF_RANGE = 101,
  MRISK_E_INTERNAL = 102
} mrisk_status;

typedef struct mrisk_config mrisk_config;
typedef struct mrisk_result mrisk_result;
typedef struct mrisk_evaluator mrisk_evaluator;

MRISK_API const char* mrisk_version(void);
MRISK_API const char* mrisk_last_error(void);
MRISK_API void mrisk_string_free(char* s);

/* ---- run configuration ---- */

MRISK_API mrisk_status mrisk_config_parse(const char* json_text, mrisk_config** out);
/* Minimal configuration: builtin name and task. */
MRISK_API mrisk_status mrisk_config_new(const char* builtin, const char* task, mrisk_config** out);
MRISK_API void mrisk_config_free(mrisk_config* cfg);
MRISK_API mrisk_status mrisk_config_set_builtin(mrisk_config* cfg, const char* name);
MRISK_API mrisk_status mrisk_config_set_task(mrisk_config* cfg, const char* task);
MRISK_API mrisk_status mrisk_config_set_kmax(mrisk_config* cfg, int64_t k_max);
MRISK_API mrisk_status mrisk_config_set_tol(mrisk_config* cfg, double tol);
MRISK_API mrisk_status mrisk_config_set_out(mrisk_config* cfg, const char* path);
MRISK_API mrisk_status mrisk_config_set_format(mrisk_config* cfg, const char* format);
MRISK_API mrisk_status mrisk_config_set_tag(mrisk_config* cfg, const char* tag);
/* Checks task-required fields and override ranges. */
MRISK_API mrisk_status mrisk_config_validate(const mrisk_config* cfg);
MRISK_API mrisk_status mrisk_config_to_json(const mrisk_config* cfg, char** out);
/* Output path and format, borrowed from the configuration; path is NULL when unset. */
MRISK_API const char* mrisk_config_out(const mrisk_config* cfg);
MRISK_API const char* mrisk_config_format(const mrisk_config* cfg);

/* ---- execution ---- */

/* Runs the task in memory. A failing task still yields a result carrying its exit code. */
MRISK_API mrisk_status mrisk_run(const mrisk_config* cfg, mrisk_result** out);
MRISK_API void mrisk_result_free(mrisk_result* res);
/* 0 success, 2 validation failure, 3 numerical failure. */
MRISK_API int mrisk_result_exit_code(const mrisk_result* res);
MRISK_API const char* mrisk_result_diagnostic(const mrisk_result* res);
MRISK_API size_t mrisk_result_row_count(const mrisk_result* res);
/* Column 0..5: task, regime, input, quantity, value, cutoff_meta. Borrowed pointer. */
MRISK_API const char* mrisk_result_cell(const mrisk_result* res, size_t row, size_t column);
MRISK_API mrisk_status mrisk_result_csv(const mrisk_result* res, char** out);
MRISK_API mrisk_status mrisk_result_table(const mrisk_result* res, char** out);

/* ---- direct evaluation on a builtin regime ---- */

/* k_max <= 0 keeps the builtin default. */
MRISK_API mrisk_status mrisk_evaluator_builtin(const char* name, int64_t k_max, mrisk_evaluator** out);
MRISK_API void mrisk_evaluator_free(mrisk_evaluator* ev);
MRISK_API size_t mrisk_evaluator_atom_count(const mrisk_evaluator* ev);
/* Dual value of a position with finite declared tail limits; infinities are reported as +-HUGE_VAL. */
MRISK_API mrisk_status mrisk_evaluator_risk(const mrisk_evaluator* ev, const double* values, size_t n,
                                            double tail_upper, double tail_lower, double* out);

#ifdef __cplusplus
}
#endif

#endif /* MRISK_MRISK_H */
