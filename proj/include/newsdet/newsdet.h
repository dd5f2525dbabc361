// Copyright 2026 The newsdet Authors
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

/*
 * C interface to the newsdet engine.
 *
 * Every function returns an nd_status. On failure the message of the most
 * recent error on the calling thread is available from nd_last_error().
 * Handles are opaque and owned by the caller; release them with the matching
 * *_destroy function (NULL is accepted). Handles may be shared between threads
 * for read-only calls; nd_clusterer_* calls on one handle must be serialized.
 */
#ifndef NEWSDET_NEWSDET_H
#define NEWSDET_NEWSDET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define ND_API __declspec(dllexport)
#elif defined(__GNUC__)
#  define ND_API __attribute__((visibility("default")))
#else
#  define ND_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nd_status {
  ND_OK = 0,
  ND_ERR_INVALID_ARGUMENT = 1,
  ND_ERR_IO = 2,
  ND_ERR_PARSE = 3,
  ND_ERR_DIMENSION = 4,
  ND_ERR_PRECONDITION = 5,
  ND_ERR_INTERNAL = 6
} nd_status;

typedef enum nd_outcome {
  ND_OUTCOME_ASSIGNED = 0,
  ND_OUTCOME_NEW_THREAD = 1,
  ND_OUTCOME_DUPLICATE = 2
} nd_outcome;

typedef enum nd_algorithm { ND_ALGO_OTC = 0, ND_ALGO_MBTC = 1 } nd_algorithm;

typedef struct nd_config nd_config;
typedef struct nd_embeddings nd_embeddings;
typedef struct nd_model nd_model;
typedef struct nd_clusterer nd_clusterer;

typedef struct nd_assignment {
  const char* message_id; /* valid until the next call on the same clusterer */
  nd_outcome outcome;
  size_t thread_id;
  double distance; /* negative when no neighbour was examined */
} nd_assignment;

ND_API const char* nd_version(void);
ND_API const char* nd_last_error(void);
ND_API const char* nd_status_name(nd_status status);

/* Configuration ---------------------------------------------------------- */
ND_API nd_status nd_config_create(nd_config** out);
ND_API void nd_config_destroy(nd_config* config);
ND_API nd_status nd_config_load(nd_config* config, const char* path);
ND_API nd_status nd_config_set(nd_config* config, const char* key, const char* value);
/* Copies the value (NUL-terminated) into buf when it fits; *needed always
   receives the required size including the terminator. */
ND_API nd_status nd_config_get(const nd_config* config, const char* key, char* buf, size_t buf_len,
                               size_t* needed);
/* Validates every value by building the typed pipeline configuration. */
ND_API nd_status nd_config_validate(const nd_config* config);

/* Commands: reports go to fixed file names inside out_dir ----------------- */
ND_API nd_status nd_cmd_train(const nd_config* config, const char* out_dir, double* validation_accuracy);
ND_API nd_status nd_cmd_detect(const nd_config* config, const char* input_path, const char* out_dir,
                               size_t* candidates);
ND_API nd_status nd_cmd_evaluate(const nd_config* config, const char* out_dir, double* mean_f1);
ND_API nd_status nd_cmd_sweep(const nd_config* config, const char* out_dir, size_t* rows);
ND_API nd_status nd_cmd_bench(const nd_config* config, const char* out_dir, double* latency_ratio);
ND_API nd_status nd_cmd_synth(const nd_config* config, const char* out_dir, size_t* messages);

/* Embeddings and feature vectors ----------------------------------------- */
ND_API nd_status nd_embeddings_load(const char* path, nd_embeddings** out, size_t* duplicates);
ND_API void nd_embeddings_destroy(nd_embeddings* embeddings);
ND_API size_t nd_embeddings_dimension(const nd_embeddings* embeddings);
ND_API size_t nd_embeddings_size(const nd_embeddings* embeddings);
/* Averaged vector of `text`; clustering != 0 selects the clustering
   preprocessing profile. `out` must hold nd_embeddings_dimension() values. */
ND_API nd_status nd_embeddings_vectorize(const nd_embeddings* embeddings, const char* text, int clustering,
                                         double* out, size_t out_len);
ND_API nd_status nd_cosine_distance(const double* u, const double* v, size_t dimension, double* out);

/* Classifier ------------------------------------------------------------- */
ND_API nd_status nd_model_load(const char* path, nd_model** out);
ND_API nd_status nd_model_save(const nd_model* model, const char* path);
ND_API void nd_model_destroy(nd_model* model);
ND_API size_t nd_model_input_dim(const nd_model* model);
ND_API nd_status nd_model_predict(const nd_model* model, const double* features, size_t dimension,
                                  double* confidence, int* is_event);

/* Streaming clustering --------------------------------------------------- */
ND_API nd_status nd_clusterer_create(nd_algorithm algorithm, size_t dimension, double threshold, size_t window,
                                     size_t batch_size, double duplicate_epsilon, nd_clusterer** out);
ND_API void nd_clusterer_destroy(nd_clusterer* clusterer);
/* Feeds one message. Completed assignments (0 or 1 for oTC, 0 or a whole
   batch for mbTC) are retrievable with nd_clusterer_assignment until the next
   push/finish call. */
ND_API nd_status nd_clusterer_push(nd_clusterer* clusterer, const char* message_id, const double* vector,
                                   size_t dimension, size_t* completed);
ND_API nd_status nd_clusterer_finish(nd_clusterer* clusterer, size_t* completed);
ND_API nd_status nd_clusterer_assignment(const nd_clusterer* clusterer, size_t index, nd_assignment* out);
ND_API size_t nd_clusterer_window_size(const nd_clusterer* clusterer);
ND_API size_t nd_clusterer_thread_count(const nd_clusterer* clusterer);
ND_API nd_status nd_clusterer_thread_size(const nd_clusterer* clusterer, size_t thread_id, size_t* size);

#ifdef __cplusplus
}
#endif

#endif /* NEWSDET_NEWSDET_H */
