/* Copyright 2026 The wavesched Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface of the wavesched simulator. Every function returns a ws_status; on failure
 * ws_last_error() describes the problem. Handles are opaque and owned by the caller.
 */

#ifndef WAVESCHED_WAVESCHED_H
#define WAVESCHED_WAVESCHED_H

#include <stddef.h>

#if defined(_WIN32)
#define WS_API __declspec(dllexport)
#elif defined(__GNUC__)
#define WS_API __attribute__((visibility("default")))
#else
#define WS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ws_status {
  WS_OK = 0,
  /* Invalid configuration, targets or trace file. */
  WS_ERR_CONFIG = 1,
  /* The simulation could not complete (deadlock, step underflow, ...). */
  WS_ERR_SIMULATION = 2,
  /* An output file could not be written. */
  WS_ERR_IO = 3,
  /* A NULL handle or an out-of-range argument. */
  WS_ERR_ARGUMENT = 4
} ws_status;

typedef enum ws_format { WS_FORMAT_JSON = 0, WS_FORMAT_CSV = 1 } ws_format;

typedef struct ws_config ws_config;
typedef struct ws_result ws_result;

/* Message of the last failure on the calling thread; empty after a success. */
WS_API const char* ws_last_error(void);
WS_API const char* ws_version(void);
/* Bundled calibrated configuration and reference targets. */
WS_API const char* ws_default_config_path(void);
WS_API const char* ws_default_targets_path(void);

/* Configuration with the built-in defaults. */
WS_API ws_status ws_config_create(ws_config** out);
WS_API void ws_config_destroy(ws_config* config);
/* Applies a `key = value` file on top of `config`. */
WS_API ws_status ws_config_load(ws_config* config, const char* path);
WS_API ws_status ws_config_set(ws_config* config, const char* key, const char* value);
/* Writes the config in file form; release with ws_string_free. */
WS_API ws_status ws_config_serialize(const ws_config* config, char** out);

/* Runs the configured policy, thread count and SIMD setting. */
WS_API ws_status ws_simulate(const ws_config* config, ws_result** out);
/* Runs every (policy, threads, simd) combination. `policies` holds CLI names
 * (big-os, little, static, affinity); `simd` holds 0/1. Failed cells are reported in the
 * result rather than failing the call. */
WS_API ws_status ws_sweep(const ws_config* config, const int* threads, size_t thread_count,
                          const char* const* policies, size_t policy_count, const int* simd,
                          size_t simd_count, ws_result** out);
/* Fits `config` to a targets file (NULL for the bundled one). `out_config` receives the
 * fitted configuration and `out_result` the residual report; either may be NULL. */
WS_API ws_status ws_calibrate(const ws_config* config, const char* targets_path,
                              ws_config** out_config, ws_result** out_result);
/* Simulates the reference policy grid and compares it with a targets file (NULL for the
 * bundled one). */
WS_API ws_status ws_paper_repro(const ws_config* config, const char* targets_path,
                                ws_result** out);

WS_API void ws_result_destroy(ws_result* result);
WS_API ws_status ws_result_render(const ws_result* result, ws_format format, char** out);
/* Simulation results: number of cells, and a metric of one cell. Metrics: fps, epf_j,
 * energy_j, avg_power_w, wall_time_s, sampled_energy_j, migrations, frames. */
WS_API ws_status ws_result_cell_count(const ws_result* result, size_t* out);
WS_API ws_status ws_result_metric(const ws_result* result, size_t cell, const char* metric,
                                  double* out);

/* Writes `content` to `path` through a temporary file and a rename. */
WS_API ws_status ws_write_file(const char* path, const char* content);
WS_API void ws_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* WAVESCHED_WAVESCHED_H */
