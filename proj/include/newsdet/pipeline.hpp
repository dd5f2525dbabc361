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

#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "newsdet/classifier.hpp"
#include "newsdet/clustering.hpp"
#include "newsdet/config.hpp"
#include "newsdet/corpus.hpp"
#include "newsdet/embedding.hpp"
#include "newsdet/evaluation.hpp"

namespace newsdet {

/// Feature extraction for both stages. IDF weighting, when configured,
/// applies to the classification features; clustering always averages.
struct Featurizer {
  Vectorizer classification;
  Vectorizer clustering;

  static Featurizer build(std::shared_ptr<const EmbeddingTable> table, std::shared_ptr<const StopwordSet> stopwords,
                          const PipelineConfig& config, std::shared_ptr<const IdfTable> idf = nullptr);
};

PreprocessProfile classification_profile(const PipelineConfig& config);

/// IDF table over the classification tokens of `corpus`.
IdfTable fit_idf(const Corpus& corpus, const PipelineConfig& config);

std::vector<LabeledExample> labeled_examples(const Corpus& corpus, const Vectorizer& vectorizer);

/// Output of classify -> cluster over one replayed stream.
struct StreamResult {
  std::vector<Assignment> assignments;  // one per kept message, stream order
  std::vector<Thread> threads;
  std::vector<double> confidence;  // per corpus message
  std::size_t kept = 0;
};

/// Replays `stream`; messages whose event confidence is at least
/// `keep_threshold` are clustered. With no model every message is kept with
/// confidence 1.
StreamResult run_stream(const Corpus& stream, const ClassifierModel* model, const Featurizer& features,
                        ClusteringAlgorithm algorithm, const ClusteringConfig& clustering, double keep_threshold);

struct SplitOutcome {
  std::size_t split = 0;
  DetectionMetrics detection;
  ClusterMetrics clusters;
  double validation_accuracy = 0.0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
};

struct ProtocolResult {
  std::vector<SplitOutcome> splits;
  DetectionMetrics mean_detection;  // counts are rounded means
  ClusterMetrics mean_clusters;
  DetectionMetrics std_detection;
  ClusterMetrics std_clusters;
};

/// Split -> train -> replay test side -> score, once per split. Splits run on
/// up to `config.jobs` threads; results are ordered by split index.
ProtocolResult run_protocol(const Corpus& corpus, std::shared_ptr<const EmbeddingTable> table,
                            std::shared_ptr<const StopwordSet> stopwords, const PipelineConfig& config,
                            std::size_t n_splits);

struct SweepRow {
  ClusteringAlgorithm algorithm = ClusteringAlgorithm::kOnline;
  std::size_t batch_size = 0;  // 0 for the online algorithm
  PreprocessMode profile = PreprocessMode::kClustering;
  double threshold = 0.0;
  ClusterMetrics metrics;
};

/// Clusters the event-labeled messages of `corpus` for every grid point.
std::vector<SweepRow> threshold_sweep(const Corpus& corpus, std::shared_ptr<const EmbeddingTable> table,
                                      std::shared_ptr<const StopwordSet> stopwords, const PipelineConfig& config,
                                      const SweepSpec& spec);

// Commands. Each writes fixed file names into `out_dir`.
struct TrainSummary {
  double validation_accuracy = 0.0;
  std::size_t epochs = 0;
  std::filesystem::path model_path;
};

TrainSummary cmd_train(const PipelineConfig& config, const std::filesystem::path& out_dir);
std::size_t cmd_detect(const PipelineConfig& config, const std::filesystem::path& input,
                       const std::filesystem::path& out_dir);
ProtocolResult cmd_evaluate(const PipelineConfig& config, const std::filesystem::path& out_dir);
std::vector<SweepRow> cmd_sweep(const PipelineConfig& config, const std::filesystem::path& out_dir);
double cmd_bench(const PipelineConfig& config, const std::filesystem::path& out_dir);
std::size_t cmd_synth(const PipelineConfig& config, const std::filesystem::path& out_dir);

// Report file names.
inline constexpr const char* kModelFile = "model.bin";
inline constexpr const char* kIdfFile = "idf.tsv";
inline constexpr const char* kTrainReportFile = "train_report.tsv";
inline constexpr const char* kAssignmentsFile = "assignments.tsv";
inline constexpr const char* kCandidatesFile = "candidates.tsv";
inline constexpr const char* kMetricsFile = "metrics.tsv";
inline constexpr const char* kMetricsJsonFile = "metrics.jsonl";
inline constexpr const char* kSweepFile = "sweep.tsv";
inline constexpr const char* kSweepTableFile = "sweep_table.tsv";
inline constexpr const char* kBenchOnlineFile = "bench_otc.tsv";
inline constexpr const char* kBenchMiniBatchFile = "bench_mbtc.tsv";
inline constexpr const char* kBenchSummaryFile = "bench_summary.tsv";
inline constexpr const char* kSynthCorpusFile = "corpus.jsonl";
inline constexpr const char* kSynthEmbeddingsFile = "embeddings.txt";

void save_idf(const IdfTable& idf, const std::filesystem::path& path);
IdfTable load_idf(const std::filesystem::path& path);

}  // namespace newsdet
