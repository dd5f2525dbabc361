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

#include "newsdet/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "newsdet/error.hpp"

namespace newsdet {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view s, T& value) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) fail(ErrorCode::kInvalidArgument, "embedding dimension must be positive");
}

bool EmbeddingTable::insert(const std::string& token, std::span<const double> vector) {
  if (vector.size() != dimension_) {
    fail(ErrorCode::kDimensionMismatch, "inconsistent vector length for token '" + token + "': expected " +
                                            std::to_string(dimension_) + ", got " + std::to_string(vector.size()));
  }
  for (double v : vector) {
    if (!std::isfinite(v)) fail(ErrorCode::kParse, "non-finite embedding value for token '" + token + "'");
  }
  auto [it, inserted] = index_.try_emplace(token, tokens_.size());
  if (inserted) {
    tokens_.push_back(token);
    data_.insert(data_.end(), vector.begin(), vector.end());
  } else {
    std::copy(vector.begin(), vector.end(), data_.begin() + static_cast<std::ptrdiff_t>(it->second * dimension_));
  }
  return !inserted;
}

std::span<const double> EmbeddingTable::find(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return {};
  return std::span<const double>(data_).subspan(it->second * dimension_, dimension_);
}

void EmbeddingTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write embeddings file " + path.string());
  out << tokens_.size() << ' ' << dimension_ << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t row = 0; row < tokens_.size(); ++row) {
    out << tokens_[row];
    for (std::size_t j = 0; j < dimension_; ++j) out << ' ' << data_[row * dimension_ + j];
    out << '\n';
  }
  if (!out) fail(ErrorCode::kIo, "failed writing embeddings file " + path.string());
}

EmbeddingLoadResult load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot read embeddings file " + path.string());

  std::optional<EmbeddingTable> table;
  std::size_t duplicates = 0;
  std::size_t line_no = 0;
  bool first = true;
  std::string line;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (first) {
      first = false;
      std::size_t vocab = 0, dim = 0;
      if (fields.size() == 2 && parse_number(fields[0], vocab) && parse_number(fields[1], dim)) {
        if (dim == 0) fail(ErrorCode::kParse, path.string() + ": header declares dimension 0");
        table.emplace(dim);
        continue;
      }
    }
    if (fields.size() < 2) {
      fail(ErrorCode::kParse, path.string() + ":" + std::to_string(line_no) + ": record has no vector values");
    }
    if (!table) table.emplace(fields.size() - 1);
    if (fields.size() - 1 != table->dimension()) {
      fail(ErrorCode::kDimensionMismatch, path.string() + ":" + std::to_string(line_no) +
                                              ": inconsistent vector length (expected " +
                                              std::to_string(table->dimension()) + ", got " +
                                              std::to_string(fields.size() - 1) + ")");
    }
    values.resize(fields.size() - 1);
    for (std::size_t j = 1; j < fields.size(); ++j) {
      if (!parse_number(fields[j], values[j - 1])) {
        fail(ErrorCode::kParse, path.string() + ":" + std::to_string(line_no) + ": bad number '" +
                                    std::string(fields[j]) + "'");
      }
    }
    if (table->insert(std::string(fields[0]), values)) ++duplicates;
  }
  if (!table || table->size() == 0) fail(ErrorCode::kParse, "embeddings file " + path.string() + " is empty");
  return {std::move(*table), duplicates};
}

FeatureVector::FeatureVector(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) fail(ErrorCode::kInvalidArgument, "feature vector has a non-finite component");
  }
}

bool FeatureVector::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

FeatureVector avg_vector(std::span<const std::string> tokens, const EmbeddingTable& table) {
  std::vector<double> sum(table.dimension(), 0.0);
  if (tokens.empty()) return FeatureVector(std::move(sum));
  for (const auto& token : tokens) {
    auto e = table.find(token);
    for (std::size_t j = 0; j < e.size(); ++j) sum[j] += e[j];
  }
  const double n = static_cast<double>(tokens.size());
  for (double& v : sum) v /= n;
  return FeatureVector(std::move(sum));
}

double IdfTable::weight(const std::string& token) const {
  auto it = weights.find(token);
  return it == weights.end() ? default_weight : it->second;
}

IdfTable compute_idf(std::span<const Tokens> documents) {
  if (documents.empty()) fail(ErrorCode::kPrecondition, "compute_idf: empty training set");
  std::unordered_map<std::string, std::size_t> df;
  std::unordered_set<std::string_view> seen;
  for (const auto& doc : documents) {
    seen.clear();
    for (const auto& token : doc) {
      if (seen.insert(token).second) ++df[token];
    }
  }
  IdfTable idf;
  idf.document_count = documents.size();
  const double d = static_cast<double>(documents.size());
  idf.default_weight = std::log(1.0 + d) + 1.0;
  idf.weights.reserve(df.size());
  for (const auto& [token, count] : df) {
    idf.weights.emplace(token, std::log((1.0 + d) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  return idf;
}

FeatureVector idf_weighted_vector(std::span<const std::string> tokens, const EmbeddingTable& table,
                                  const IdfTable& idf) {
  std::vector<double> sum(table.dimension(), 0.0);
  double total = 0.0;
  for (const auto& token : tokens) {
    const double w = idf.weight(token);
    total += w;
    auto e = table.find(token);
    for (std::size_t j = 0; j < e.size(); ++j) sum[j] += w * e[j];
  }
  if (total <= 0.0) return FeatureVector::zeros(table.dimension());
  for (double& v : sum) v /= total;
  return FeatureVector(std::move(sum));
}

double cosine_distance(const FeatureVector& u, const FeatureVector& v) {
  if (u.dimension() != v.dimension()) {
    fail(ErrorCode::kDimensionMismatch, "cosine_distance: dimension mismatch (" + std::to_string(u.dimension()) +
                                            " vs " + std::to_string(v.dimension()) + ")");
  }
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.dimension(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return 2.0;
  return std::clamp(1.0 - dot / (std::sqrt(nu) * std::sqrt(nv)), 0.0, 2.0);
}

Vectorizer::Vectorizer(std::shared_ptr<const EmbeddingTable> table, PreprocessProfile profile, Weighting weighting,
                       std::shared_ptr<const IdfTable> idf)
    : table_(std::move(table)), profile_(std::move(profile)), weighting_(weighting), idf_(std::move(idf)) {
  if (!table_) fail(ErrorCode::kInvalidArgument, "vectorizer needs an embedding table");
  if (weighting_ == Weighting::kIdf && !idf_) fail(ErrorCode::kInvalidArgument, "IDF weighting needs an IDF table");
  profile_.validate();
}

FeatureVector Vectorizer::vectorize(std::span<const std::string> tokens) const {
  return weighting_ == Weighting::kIdf ? idf_weighted_vector(tokens, *table_, *idf_) : avg_vector(tokens, *table_);
}

}  // namespace newsdet
