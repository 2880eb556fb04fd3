/* Copyright 2026 The latentgeo Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef LATENTGEO_LATENTGEO_H
#define LATENTGEO_LATENTGEO_H

/* C interface of the latentgeo shared library. Every call returns an
 * lg_status; on failure lg_last_error() holds a message for the calling
 * thread until its next failing call. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define LG_API __declspec(dllexport)
#else
#define LG_API __attribute__((visibility("default")))
#endif

typedef enum lg_status {
    LG_OK = 0,
    LG_ERR_INVALID_INPUT = 1,
    LG_ERR_SHAPE = 2,
    LG_ERR_IO = 3,
    LG_ERR_PARSE = 4,
    LG_ERR_VERSION_MISMATCH = 5,
    LG_ERR_CONFIG = 6,
    LG_ERR_MISSING_CHECKPOINT = 7,
    LG_ERR_DISCONNECTED_GRAPH = 8,
    LG_ERR_INSUFFICIENT_NEIGHBORS = 9,
    LG_ERR_SINGLE_CLASS = 10,
    LG_ERR_ZERO_VARIANCE = 11,
    LG_ERR_NUMERICAL = 12,
    LG_ERR_NULL_ARGUMENT = 13,
    LG_ERR_INTERNAL = 14
} lg_status;

typedef struct lg_config lg_config;
typedef struct lg_model lg_model;

LG_API const char* lg_version(void);
LG_API const char* lg_last_error(void);
LG_API const char* lg_status_name(lg_status status);
/* Process exit code for a status: 0 ok, 2 configuration or input, 3 files,
 * 4 numerical. */
LG_API int lg_exit_code(lg_status status);

/* ---- run configuration ---- */

LG_API lg_status lg_config_create(lg_config** out);
LG_API void lg_config_destroy(lg_config* cfg);
/* Reads `key = value` lines; '#' starts a comment. */
LG_API lg_status lg_config_load_file(lg_config* cfg, const char* path);
/* Command-line layer; takes precedence over the file. */
LG_API lg_status lg_config_set(lg_config* cfg, const char* key, const char* value);

/* ---- commands ---- */

LG_API size_t lg_command_count(void);
LG_API const char* lg_command_name(size_t index);
/* Help text listing the keys of a command. Owned by the library. */
LG_API lg_status lg_command_help(const char* command, const char** out);
/* Runs a command. Progress lines go to `log` and non-fatal warnings to
 * `warn` when the callbacks are given. */
typedef void (*lg_line_callback)(const char* line, void* user);
LG_API lg_status lg_run(const char* command, const lg_config* cfg, lg_line_callback log, lg_line_callback warn,
                        void* user);

/* ---- trained models ---- */

LG_API lg_status lg_model_load(const char* path, lg_model** out);
LG_API void lg_model_destroy(lg_model* model);
/* "vae" or "disentangled". */
LG_API const char* lg_model_kind(const lg_model* model);
LG_API size_t lg_model_input_dim(const lg_model* model);
/* Full latent width (specified plus unspecified for a disentangled model). */
LG_API size_t lg_model_latent_dim(const lg_model* model);
/* Posterior means, `n` rows of input_dim values in, n rows of latent_dim out. */
LG_API lg_status lg_model_encode(const lg_model* model, const double* x, size_t n, double* latent_out);
LG_API lg_status lg_model_decode(const lg_model* model, const double* latent, size_t n, double* x_out);
/* Length of the energy-minimizing curve between two latent codes under the
 * decoder's pullback metric. `segments` 0 selects the default. */
LG_API lg_status lg_model_geodesic_distance(const lg_model* model, const double* a, const double* b,
                                            size_t segments, double* distance_out);

#ifdef __cplusplus
}
#endif

#endif /* LATENTGEO_LATENTGEO_H */
