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
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "newsdet/classifier.hpp"
#include "newsdet/clustering.hpp"
#include "newsdet/corpus.hpp"
#include "newsdet/embedding.hpp"
#include "newsdet/evaluation.hpp"
#include "newsdet/ranking.hpp"
#include "newsdet/synthetic.hpp"

namespace newsdet {

/// Flat `dotted.key = value` settings. Every key has a registered default;
/// setting an unknown key is an error. Lines starting with '#' are comments.
class Config {
 public:
  Config();

  void load_file(const std::filesystem::path& path);
  void parse(std::string_view text, std::string_view origin = "<string>");
  void set(const std::string& key, const std::string& value);

  const std::string& get(const std::string& key) const;
  bool has_key(const std::string& key) const { return values_.contains(key); }
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

  /// Canonical `key = value` listing, sorted by key.
  std::string dump() const;

 private:
  std::map<std::string, std::string> values_;
};

struct SweepSpec {
  std::vector<ClusteringAlgorithm> algorithms{ClusteringAlgorithm::kOnline, ClusteringAlgorithm::kMiniBatch};
  std::vector<std::size_t> batch_sizes{50, 100, 200, 400};
  std::vector<double> thresholds{0.05, 0.15, 0.20, 0.25, 0.35};
  std::vector<PreprocessMode> profiles{PreprocessMode::kClassification, PreprocessMode::kClustering};
};

struct BenchSpec {
  std::size_t messages = 30000;
  std::size_t window = 10000;
  std::size_t batch_size = 50;
};

/// Typed view of every tunable.
struct PipelineConfig {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;

  std::filesystem::path corpus_path;
  CorpusFormat corpus_format = CorpusFormat::kJsonLines;
  std::filesystem::path embeddings_path;
  std::filesystem::path stopwords_path;
  std::filesystem::path model_path;
  std::filesystem::path idf_path;
  std::set<std::string> sport_events;

  Weighting weighting = Weighting::kAverage;
  std::string mention_token = "MENTION";
  std::string url_token = "URL";
  std::string number_token = "NUMBER";

  NetworkArchitecture architecture;
  TrainingConfig training;
  double keep_threshold = 0.5;

  ClusteringAlgorithm algorithm = ClusteringAlgorithm::kMiniBatch;
  ClusteringConfig clustering;
  std::size_t detect_window = 5000;

  RankingConfig ranking;
  DetectionCriterion detection;
  SplitSpec split;
  std::size_t n_splits = 20;

  SweepSpec sweep;
  BenchSpec bench;
  SyntheticConfig synth;

  static PipelineConfig from(const Config& config);
};

}  // namespace newsdet
