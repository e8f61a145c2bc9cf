/* Copyright 2026 The sigres Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ========================================================================= */
 // C interface of the sigres library.
 //
 // Objects are opaque handles created and destroyed through this header. Every fallible call returns a
 // sigres_status; on failure sigres_last_error() describes the problem (thread-local, valid until the next
 // failing call on the same thread). Strings returned through char** are owned by the caller and released with
 // sigres_string_free. Matrices are row-major, one sample per row.


#ifndef SIGRES_H
#define SIGRES_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SIGRES_BUILDING_LIBRARY)
#    define SIGRES_API __declspec(dllexport)
#  else
#    define SIGRES_API __declspec(dllimport)
#  endif
#else
#  define SIGRES_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sigres_status {
    SIGRES_OK = 0,
    SIGRES_ERR_CONFIG = 1,     /* invalid configuration; the message names the key */
    SIGRES_ERR_DATA = 2,       /* malformed or unreadable input data */
    SIGRES_ERR_SHAPE = 3,      /* dimension mismatch or invalid sizes */
    SIGRES_ERR_NUMERICAL = 4,  /* non-finite values, failed solves */
    SIGRES_ERR_ARGUMENT = 5,   /* null handle or pointer */
    SIGRES_ERR_INTERNAL = 6    /* anything else, including I/O failures */
} sigres_status;

typedef struct sigres_config sigres_config;
typedef struct sigres_report sigres_report;
typedef struct sigres_reservoir sigres_reservoir;

SIGRES_API const char* sigres_version(void);
SIGRES_API const char* sigres_last_error(void);
SIGRES_API void sigres_string_free(char* s);

/* Log messages from long-running calls. level: 0 info, 1 warning. A NULL callback restores stderr output. */
typedef void (*sigres_log_callback)(int level, const char* message, void* user);
SIGRES_API void sigres_set_log_callback(sigres_log_callback callback, void* user);

/* ---- experiment configuration ---------------------------------------------------------------------------- */

/* kind: kernel-convergence, hurst, missing-data, timing, run, gen-fbm, logsig. */
SIGRES_API sigres_status sigres_config_default(const char* kind, sigres_config** out);
SIGRES_API sigres_status sigres_config_load(const char* kind, const char* file, sigres_config** out);
/* key is "section.name", e.g. "experiment.seed" or "grid.rcde.lambda". */
SIGRES_API sigres_status sigres_config_set(sigres_config* cfg, const char* key, const char* value);
SIGRES_API sigres_status sigres_config_validate(const sigres_config* cfg);
SIGRES_API sigres_status sigres_config_ini(const sigres_config* cfg, char** out);
SIGRES_API void sigres_config_free(sigres_config* cfg);

/* ---- experiments ----------------------------------------------------------------------------------------- */

SIGRES_API sigres_status sigres_run(const sigres_config* cfg, sigres_report** out);
/* 1 when the acceptance thresholds held (always 1 outside kernel-convergence), 0 otherwise or on NULL. */
SIGRES_API int sigres_report_passed(const sigres_report* report);
SIGRES_API sigres_status sigres_report_text(const sigres_report* report, char** out);
SIGRES_API sigres_status sigres_report_json(const sigres_report* report, char** out);
/* Metric or timing value; SIGRES_ERR_ARGUMENT if the key is absent. */
SIGRES_API sigres_status sigres_report_value(const sigres_report* report, const char* key, char** out);
/* Writes report.txt and summary.json into dir. */
SIGRES_API sigres_status sigres_report_write(const sigres_report* report, const char* dir);
SIGRES_API void sigres_report_free(sigres_report* report);

/* ---- reservoirs ------------------------------------------------------------------------------------------ */

typedef struct sigres_reservoir_spec {
    const char* variant;     /* "rcde", "rfcde", "rrde" */
    const char* activation;  /* "identity", "tanh", "relu" */
    size_t width;
    size_t input_dim;
    double sigma_a;
    double sigma_b;
    double sigma_0;
    uint64_t seed;
    size_t num_rff;          /* RF-CDE */
    double frequency_scale;  /* RF-CDE */
    int level;               /* R-RDE */
    size_t chunk_size;       /* R-RDE */
} sigres_reservoir_spec;

SIGRES_API void sigres_reservoir_spec_init(sigres_reservoir_spec* spec);
SIGRES_API sigres_status sigres_reservoir_create(const sigres_reservoir_spec* spec, sigres_reservoir** out);
SIGRES_API size_t sigres_reservoir_width(const sigres_reservoir* r);
/* Final state of one path into features[width]. times may be NULL (equispaced on [0, 1]). */
SIGRES_API sigres_status sigres_reservoir_extract(const sigres_reservoir* r, const double* times,
                                                  const double* values, size_t length, size_t dim,
                                                  double* features);
SIGRES_API void sigres_reservoir_free(sigres_reservoir* r);

/* ---- kernels and signatures ------------------------------------------------------------------------------ */

/* Signature kernel of two equispaced paths of the same dim by the Goursat PDE (order 1 or 2). */
SIGRES_API sigres_status sigres_sig_kernel_pde(const double* x, size_t x_length, const double* y,
                                               size_t y_length, size_t dim, int refinement, int order,
                                               double* out);
/* Lyndon coordinates of log(S(x)) truncated at level. *count receives the basis size; coefficients are written
 * only when capacity >= *count, so a first call with capacity 0 queries the size. */
SIGRES_API sigres_status sigres_log_signature(const double* values, size_t length, size_t dim, int level,
                                              double* coeffs, size_t capacity, size_t* count);

#ifdef __cplusplus
}
#endif

#endif /* SIGRES_H */
