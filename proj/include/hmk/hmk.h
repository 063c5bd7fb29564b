// Copyright 2026 The hmk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HMK_HMK_H_
#define HMK_HMK_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(HMK_BUILDING_LIBRARY)
#define HMK_API __declspec(dllexport)
#else
#define HMK_API __declspec(dllimport)
#endif
#else
#define HMK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hmk_status {
  HMK_OK = 0,
  HMK_INVALID_ARGUMENT = 1,
  HMK_PARSE = 2,
  HMK_COVERAGE = 3,
  HMK_LENGTH = 4,
  HMK_INCONSISTENT = 5,
  HMK_PRECONDITION = 6,
  HMK_NUMERICAL = 7,
  HMK_INTERNAL = 8
} hmk_status;

typedef enum hmk_mode { HMK_MODE_AUTO = 0, HMK_MODE_FLOAT = 1, HMK_MODE_EXACT = 2 } hmk_mode;

typedef enum hmk_verdict { HMK_PSD = 0, HMK_NOT_PSD = 1, HMK_INDETERMINATE = 2 } hmk_verdict;

typedef struct hmk_config hmk_config;
typedef struct hmk_result hmk_result;
typedef struct hmk_vector hmk_vector;
typedef struct hmk_decomposition hmk_decomposition;

HMK_API const char* hmk_version(void);
HMK_API const char* hmk_status_string(hmk_status status);

/* Message for the most recent failure on the calling thread. */
HMK_API const char* hmk_last_error_message(void);

/* Batch runs. Keys: command, vector, sequence, family, tensor-out, out,
   mode, tol, pmax, m, n, m-list, x, seed, restarts, max-iter, fit-tol,
   m-max. List values are comma separated. */
HMK_API hmk_status hmk_config_create(hmk_config** out);
HMK_API void hmk_config_destroy(hmk_config* config);
HMK_API hmk_status hmk_config_set(hmk_config* config, const char* key, const char* value);
HMK_API hmk_status hmk_run(const hmk_config* config, hmk_result** out);

HMK_API void hmk_result_destroy(hmk_result* result);
HMK_API int hmk_result_exit_code(const hmk_result* result);
HMK_API const char* hmk_result_json(const hmk_result* result);
HMK_API const char* hmk_result_summary(const hmk_result* result);
HMK_API size_t hmk_result_detail_count(const hmk_result* result);
HMK_API const char* hmk_result_detail(const hmk_result* result, size_t index);
/* Empty unless the run asked for a tensor document. */
HMK_API const char* hmk_result_tensor_json(const hmk_result* result);

/* Generating vectors v_0..v_L. Text entries are "p/q" or integers. */
HMK_API hmk_status hmk_vector_from_doubles(const double* values, size_t count, hmk_vector** out);
HMK_API hmk_status hmk_vector_from_strings(const char* const* values, size_t count, hmk_vector** out);
HMK_API void hmk_vector_destroy(hmk_vector* v);
HMK_API size_t hmk_vector_length(const hmk_vector* v);
HMK_API int hmk_vector_is_exact(const hmk_vector* v);

HMK_API hmk_status hmk_psd_check(const hmk_vector* v, int p, hmk_mode mode, double tol, hmk_verdict* verdict,
                                 int* rank);
HMK_API hmk_status hmk_strong_hankel_check(const hmk_vector* v, int n, int m, hmk_mode mode, double tol,
                                           int* valid);
HMK_API hmk_status hmk_polynomial_eval(const hmk_vector* v, int n, int m, const double* x, double* direct,
                                       double* contracted);

HMK_API hmk_status hmk_decompose(const hmk_vector* v, int n, int m, hmk_mode mode, double tol,
                                 hmk_decomposition** out);
HMK_API void hmk_decomposition_destroy(hmk_decomposition* d);
HMK_API size_t hmk_decomposition_atom_count(const hmk_decomposition* d);
HMK_API hmk_status hmk_decomposition_atom(const hmk_decomposition* d, size_t index, double* node, double* weight);
HMK_API double hmk_decomposition_augmented_c(const hmk_decomposition* d);
HMK_API double hmk_decomposition_residual(const hmk_decomposition* d);

#ifdef __cplusplus
}
#endif

#endif  // HMK_HMK_H_
