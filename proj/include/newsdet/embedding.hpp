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
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace newsdet {

using Tokens = std::vector<std::string>;
using StopwordSet = std::unordered_set<std::string>;

/// Pretrained token -> dense vector table. Immutable once built; safe to
/// share between threads.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension);

  /// Inserts or overwrites. Returns true when the token was already present.
  bool insert(const std::string& token, std::span<const double> vector);

  /// Empty span when the token is out of vocabulary.
  std::span<const double> find(const std::string& token) const;
  bool contains(const std::string& token) const { return index_.contains(token); }

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  /// Writes the textual format with a "<vocab> <dim>" header line.
  void save(const std::filesystem::path& path) const;

 private:
  std::size_t dimension_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> tokens_;
  std::vector<double> data_;  // row-major, one row per token
};

struct EmbeddingLoadResult {
  EmbeddingTable table;
  std::size_t duplicates = 0;
};

/// Loads "<token> <v1> ... <vd>" lines with an optional "<vocab> <dim>"
/// header. Without a header the dimension comes from the first record.
/// Duplicate tokens: last occurrence wins.
EmbeddingLoadResult load_embeddings(const std::filesystem::path& path);

class FeatureVector {
 public:
  FeatureVector() = default;
  explicit FeatureVector(std::vector<double> values);
  static FeatureVector zeros(std::size_t dimension) {
    return FeatureVector(std::vector<double>(dimension, 0.0));
  }

  std::span<const double> values() const noexcept { return values_; }
  std::size_t dimension() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  bool is_zero() const noexcept;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::vector<double> values_;
};

enum class PreprocessMode { kClassification, kClustering };

struct PreprocessProfile {
  PreprocessMode mode = PreprocessMode::kClassification;
  std::string mention_token = "MENTION";
  std::string url_token = "URL";
  std::string number_token = "NUMBER";
  bool lowercase = false;
  std::shared_ptr<const StopwordSet> stopwords;  // clustering only

  static PreprocessProfile classification();
  /// Uses the bundled English list when `stopwords` is null.
  static PreprocessProfile clustering(std::shared_ptr<const StopwordSet> stopwords = nullptr);

  void validate() const;
};

/// The bundled English stopword list.
std::shared_ptr<const StopwordSet> default_stopwords();
std::shared_ptr<const StopwordSet> load_stopwords(const std::filesystem::path& path);

/// Whitespace tokenization with edge punctuation stripped and mentions, URLs
/// and numbers replaced. Clustering mode additionally lowercases, drops URLs,
/// strips the '#' of hashtags and removes stopwords.
Tokens preprocess(std::string_view text, const PreprocessProfile& profile);

bool is_number_token(std::string_view token);
bool is_url_token(std::string_view token);

/// Mean of one embedding per token; out-of-vocabulary tokens contribute zero
/// vectors but still count in the denominator.
FeatureVector avg_vector(std::span<const std::string> tokens, const EmbeddingTable& table);

struct IdfTable {
  std::unordered_map<std::string, double> weights;
  double default_weight = 1.0;
  std::size_t document_count = 0;

  double weight(const std::string& token) const;
};

/// weight = ln((1 + D) / (1 + df)) + 1; unseen tokens get ln(1 + D) + 1.
IdfTable compute_idf(std::span<const Tokens> documents);

/// sum_i w_i e_i / sum_i w_i, where OOV tokens keep their weight in the
/// denominator. A zero total weight yields the zero vector.
FeatureVector idf_weighted_vector(std::span<const std::string> tokens, const EmbeddingTable& table,
                                  const IdfTable& idf);

/// 1 - cos(u, v), clamped to [0, 2]. A zero operand is maximally far (2.0).
double cosine_distance(const FeatureVector& u, const FeatureVector& v);

enum class Weighting { kAverage, kIdf };

/// Text -> feature vector with a fixed profile and table.
class Vectorizer {
 public:
  Vectorizer(std::shared_ptr<const EmbeddingTable> table, PreprocessProfile profile,
             Weighting weighting = Weighting::kAverage,
             std::shared_ptr<const IdfTable> idf = nullptr);

  Tokens tokens(std::string_view text) const { return preprocess(text, profile_); }
  FeatureVector vectorize(std::span<const std::string> tokens) const;
  FeatureVector vectorize(std::string_view text) const { return vectorize(tokens(text)); }

  const EmbeddingTable& table() const noexcept { return *table_; }
  const PreprocessProfile& profile() const noexcept { return profile_; }

 private:
  std::shared_ptr<const EmbeddingTable> table_;
  PreprocessProfile profile_;
  Weighting weighting_;
  std::shared_ptr<const IdfTable> idf_;
};

}  // namespace newsdet
