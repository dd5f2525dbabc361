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

#include "newsdet/newsdet.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "newsdet/classifier.hpp"
#include "newsdet/clustering.hpp"
#include "newsdet/config.hpp"
#include "newsdet/embedding.hpp"
#include "newsdet/error.hpp"
#include "newsdet/pipeline.hpp"

struct nd_config {
  newsdet::Config config;
};

struct nd_embeddings {
  std::shared_ptr<const newsdet::EmbeddingTable> table;
  newsdet::Vectorizer classification;
  newsdet::Vectorizer clustering;
};

struct nd_model {
  newsdet::ClassifierModel model;
};

struct nd_clusterer {
  std::unique_ptr<newsdet::ThreadClusterer> impl;
  std::vector<newsdet::Assignment> completed;
};

namespace {

thread_local std::string last_error;

nd_status record(nd_status status, const char* message) {
  last_error = message;
  return status;
}

template <typename F>
nd_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return ND_OK;
  } catch (const newsdet::Error& e) {
    return record(static_cast<nd_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return record(ND_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(ND_ERR_INTERNAL, e.what());
  }
}

void need(const void* p, const char* name) {
  if (p == nullptr) newsdet::fail(newsdet::ErrorCode::kInvalidArgument, std::string(name) + " is null");
}

newsdet::PipelineConfig typed(const nd_config* config) {
  need(config, "config");
  return newsdet::PipelineConfig::from(config->config);
}

std::filesystem::path out_path(const char* out_dir) {
  need(out_dir, "out_dir");
  return out_dir;
}

nd_status store_completed(nd_clusterer* c, std::vector<newsdet::Assignment> done, size_t* completed) {
  c->completed = std::move(done);
  if (completed) *completed = c->completed.size();
  return ND_OK;
}

}  // namespace

extern "C" {

const char* nd_version(void) { return NEWSDET_VERSION; }

const char* nd_last_error(void) { return last_error.c_str(); }

const char* nd_status_name(nd_status status) {
  switch (status) {
    case ND_OK: return "ok";
    case ND_ERR_INVALID_ARGUMENT: return "invalid argument";
    case ND_ERR_IO: return "i/o error";
    case ND_ERR_PARSE: return "parse error";
    case ND_ERR_DIMENSION: return "dimension mismatch";
    case ND_ERR_PRECONDITION: return "precondition failed";
    case ND_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

nd_status nd_config_create(nd_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new nd_config{};
  });
}

void nd_config_destroy(nd_config* config) { delete config; }

nd_status nd_config_load(nd_config* config, const char* path) {
  return guarded([&] {
    need(config, "config");
    need(path, "path");
    config->config.load_file(path);
  });
}

nd_status nd_config_set(nd_config* config, const char* key, const char* value) {
  return guarded([&] {
    need(config, "config");
    need(key, "key");
    need(value, "value");
    config->config.set(key, value);
  });
}

nd_status nd_config_get(const nd_config* config, const char* key, char* buf, size_t buf_len, size_t* needed) {
  return guarded([&] {
    need(config, "config");
    need(key, "key");
    const auto& value = config->config.get(key);
    if (needed) *needed = value.size() + 1;
    if (buf && buf_len > value.size()) std::memcpy(buf, value.c_str(), value.size() + 1);
  });
}

nd_status nd_config_validate(const nd_config* config) {
  return guarded([&] { typed(config); });
}

nd_status nd_cmd_train(const nd_config* config, const char* out_dir, double* validation_accuracy) {
  return guarded([&] {
    const auto summary = newsdet::cmd_train(typed(config), out_path(out_dir));
    if (validation_accuracy) *validation_accuracy = summary.validation_accuracy;
  });
}

nd_status nd_cmd_detect(const nd_config* config, const char* input_path, const char* out_dir, size_t* candidates) {
  return guarded([&] {
    const auto n = newsdet::cmd_detect(typed(config), input_path ? input_path : "", out_path(out_dir));
    if (candidates) *candidates = n;
  });
}

nd_status nd_cmd_evaluate(const nd_config* config, const char* out_dir, double* mean_f1) {
  return guarded([&] {
    const auto result = newsdet::cmd_evaluate(typed(config), out_path(out_dir));
    if (mean_f1) *mean_f1 = result.mean_detection.f1;
  });
}

nd_status nd_cmd_sweep(const nd_config* config, const char* out_dir, size_t* rows) {
  return guarded([&] {
    const auto table = newsdet::cmd_sweep(typed(config), out_path(out_dir));
    if (rows) *rows = table.size();
  });
}

nd_status nd_cmd_bench(const nd_config* config, const char* out_dir, double* latency_ratio) {
  return guarded([&] {
    const auto ratio = newsdet::cmd_bench(typed(config), out_path(out_dir));
    if (latency_ratio) *latency_ratio = ratio;
  });
}

nd_status nd_cmd_synth(const nd_config* config, const char* out_dir, size_t* messages) {
  return guarded([&] {
    const auto n = newsdet::cmd_synth(typed(config), out_path(out_dir));
    if (messages) *messages = n;
  });
}

nd_status nd_embeddings_load(const char* path, nd_embeddings** out, size_t* duplicates) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    auto loaded = newsdet::load_embeddings(path);
    auto table = std::make_shared<const newsdet::EmbeddingTable>(std::move(loaded.table));
    *out = new nd_embeddings{table, newsdet::Vectorizer(table, newsdet::PreprocessProfile::classification()),
                             newsdet::Vectorizer(table, newsdet::PreprocessProfile::clustering())};
    if (duplicates) *duplicates = loaded.duplicates;
  });
}

void nd_embeddings_destroy(nd_embeddings* embeddings) { delete embeddings; }

size_t nd_embeddings_dimension(const nd_embeddings* embeddings) {
  return embeddings ? embeddings->table->dimension() : 0;
}

size_t nd_embeddings_size(const nd_embeddings* embeddings) { return embeddings ? embeddings->table->size() : 0; }

nd_status nd_embeddings_vectorize(const nd_embeddings* embeddings, const char* text, int clustering, double* out,
                                  size_t out_len) {
  return guarded([&] {
    need(embeddings, "embeddings");
    need(text, "text");
    need(out, "out");
    if (out_len != embeddings->table->dimension()) {
      newsdet::fail(newsdet::ErrorCode::kDimensionMismatch, "output buffer length does not match the dimension");
    }
    const auto& vectorizer = clustering ? embeddings->clustering : embeddings->classification;
    const auto v = vectorizer.vectorize(std::string_view(text));
    std::memcpy(out, v.values().data(), out_len * sizeof(double));
  });
}

nd_status nd_cosine_distance(const double* u, const double* v, size_t dimension, double* out) {
  return guarded([&] {
    need(u, "u");
    need(v, "v");
    need(out, "out");
    *out = newsdet::cosine_distance(newsdet::FeatureVector(std::vector<double>(u, u + dimension)),
                                    newsdet::FeatureVector(std::vector<double>(v, v + dimension)));
  });
}

nd_status nd_model_load(const char* path, nd_model** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new nd_model{newsdet::load_model(path)};
  });
}

nd_status nd_model_save(const nd_model* model, const char* path) {
  return guarded([&] {
    need(model, "model");
    need(path, "path");
    newsdet::save_model(model->model, path);
  });
}

void nd_model_destroy(nd_model* model) { delete model; }

size_t nd_model_input_dim(const nd_model* model) { return model ? model->model.architecture().input_dim : 0; }

nd_status nd_model_predict(const nd_model* model, const double* features, size_t dimension, double* confidence,
                           int* is_event) {
  return guarded([&] {
    need(model, "model");
    need(features, "features");
    const auto p = model->model.predict(std::span<const double>(features, dimension));
    if (confidence) *confidence = p.confidence;
    if (is_event) *is_event = p.label == newsdet::MessageClass::kEvent ? 1 : 0;
  });
}

nd_status nd_clusterer_create(nd_algorithm algorithm, size_t dimension, double threshold, size_t window,
                              size_t batch_size, double duplicate_epsilon, nd_clusterer** out) {
  return guarded([&] {
    need(out, "out");
    if (dimension == 0) newsdet::fail(newsdet::ErrorCode::kInvalidArgument, "dimension must be positive");
    newsdet::ClusteringConfig config;
    config.threshold = threshold;
    config.window = window;
    config.batch_size = batch_size;
    config.duplicate_epsilon = duplicate_epsilon;
    const auto algo =
        algorithm == ND_ALGO_OTC ? newsdet::ClusteringAlgorithm::kOnline : newsdet::ClusteringAlgorithm::kMiniBatch;
    *out = new nd_clusterer{newsdet::make_clusterer(algo, dimension, config), {}};
  });
}

void nd_clusterer_destroy(nd_clusterer* clusterer) { delete clusterer; }

nd_status nd_clusterer_push(nd_clusterer* clusterer, const char* message_id, const double* vector, size_t dimension,
                            size_t* completed) {
  return guarded([&] {
    need(clusterer, "clusterer");
    need(message_id, "message_id");
    need(vector, "vector");
    newsdet::ClusterInput input;
    input.message_id = message_id;
    input.vector = newsdet::FeatureVector(std::vector<double>(vector, vector + dimension));
    store_completed(clusterer, clusterer->impl->push(std::move(input)), completed);
  });
}

nd_status nd_clusterer_finish(nd_clusterer* clusterer, size_t* completed) {
  return guarded([&] {
    need(clusterer, "clusterer");
    store_completed(clusterer, clusterer->impl->finish(), completed);
  });
}

nd_status nd_clusterer_assignment(const nd_clusterer* clusterer, size_t index, nd_assignment* out) {
  return guarded([&] {
    need(clusterer, "clusterer");
    need(out, "out");
    if (index >= clusterer->completed.size()) {
      newsdet::fail(newsdet::ErrorCode::kInvalidArgument, "assignment index out of range");
    }
    const auto& a = clusterer->completed[index];
    out->message_id = a.message_id.c_str();
    out->outcome = a.outcome == newsdet::Outcome::kAssigned    ? ND_OUTCOME_ASSIGNED
                   : a.outcome == newsdet::Outcome::kNewThread ? ND_OUTCOME_NEW_THREAD
                                                               : ND_OUTCOME_DUPLICATE;
    out->thread_id = a.thread_id;
    out->distance = a.distance.value_or(-1.0);
  });
}

size_t nd_clusterer_window_size(const nd_clusterer* clusterer) {
  return clusterer ? clusterer->impl->window().size() : 0;
}

size_t nd_clusterer_thread_count(const nd_clusterer* clusterer) {
  return clusterer ? clusterer->impl->thread_count() : 0;
}

nd_status nd_clusterer_thread_size(const nd_clusterer* clusterer, size_t thread_id, size_t* size) {
  return guarded([&] {
    need(clusterer, "clusterer");
    need(size, "size");
    if (thread_id >= clusterer->impl->thread_count()) {
      newsdet::fail(newsdet::ErrorCode::kInvalidArgument, "unknown thread id");
    }
    *size = clusterer->impl->thread(thread_id).size();
  });
}

}  // extern "C"
