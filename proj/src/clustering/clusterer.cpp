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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "newsdet/clustering.hpp"
#include "newsdet/error.hpp"

namespace newsdet {

void ClusteringConfig::validate() const {
  if (!(threshold >= 0.0 && threshold <= 2.0)) {
    fail(ErrorCode::kInvalidArgument, "clustering.threshold must lie in [0, 2]");
  }
  if (window == 0) fail(ErrorCode::kInvalidArgument, "clustering.window must be positive");
  if (batch_size == 0) fail(ErrorCode::kInvalidArgument, "clustering.batch_size must be positive");
  if (!(duplicate_epsilon >= 0.0)) fail(ErrorCode::kInvalidArgument, "clustering.duplicate_epsilon must be >= 0");
  if (threshold > 0.0 && !(threshold > duplicate_epsilon)) {
    fail(ErrorCode::kInvalidArgument, "clustering.threshold must exceed clustering.duplicate_epsilon");
  }
}

ClusteringAlgorithm parse_clustering_algorithm(std::string_view name) {
  if (name == "otc" || name == "online") return ClusteringAlgorithm::kOnline;
  if (name == "mbtc" || name == "minibatch") return ClusteringAlgorithm::kMiniBatch;
  fail(ErrorCode::kInvalidArgument, "unknown clustering algorithm '" + std::string(name) + "' (expected otc or mbtc)");
}

std::string_view to_string(ClusteringAlgorithm algorithm) {
  return algorithm == ClusteringAlgorithm::kOnline ? "otc" : "mbtc";
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::kAssigned: return "assigned";
    case Outcome::kNewThread: return "new";
    case Outcome::kDuplicate: return "duplicate";
  }
  return "?";
}

double Thread::unique_author_ratio() const {
  if (members.empty()) return 0.0;
  std::unordered_set<std::string_view> authors;
  for (const auto& m : members) authors.insert(m.author_id);
  return static_cast<double>(authors.size()) / static_cast<double>(members.size());
}

double Thread::mean_confidence() const {
  if (members.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& m : members) sum += m.confidence;
  return sum / static_cast<double>(members.size());
}

double Thread::mean_timestamp() const {
  if (members.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& m : members) sum += static_cast<double>(m.timestamp);
  return sum / static_cast<double>(members.size());
}

ThreadClusterer::ThreadClusterer(std::size_t dimension, const ClusteringConfig& config)
    : config_((config.validate(), config)), window_(dimension, config.window) {}

void ThreadClusterer::check_dimension(const FeatureVector& vector) const {
  if (vector.dimension() != window_.dimension()) {
    fail(ErrorCode::kDimensionMismatch, "feature dimension " + std::to_string(vector.dimension()) +
                                            " does not match clusterer dimension " +
                                            std::to_string(window_.dimension()));
  }
}

std::size_t ThreadClusterer::open_thread(const ClusterInput& input) {
  Thread thread;
  thread.id = threads_.size();
  thread.created_at = input.timestamp;
  threads_.push_back(std::move(thread));
  return threads_.back().id;
}

void ThreadClusterer::record_member(std::size_t thread_id, const ClusterInput& input, bool duplicate) {
  Thread& thread = threads_.at(thread_id);
  thread.members.push_back({input.message_id, input.author_id, input.timestamp, input.confidence, duplicate});
  for (const auto& term : input.terms) ++thread.term_counts[term];
  thread.total_terms += input.terms.size();
}

Assignment OnlineThreadClusterer::step(ClusterInput input) {
  check_dimension(input.vector);
  Assignment a{input.message_id, Outcome::kNewThread, 0, std::nullopt};
  if (auto nn = window_.nearest(input.vector)) {
    a.distance = nn->distance;
    if (nn->distance <= config_.duplicate_epsilon) {
      a.outcome = Outcome::kDuplicate;
      a.thread_id = nn->thread_id;
      record_member(a.thread_id, input, true);
      return a;
    }
    if (nn->distance < config_.threshold) {
      a.outcome = Outcome::kAssigned;
      a.thread_id = nn->thread_id;
    }
  }
  if (a.outcome == Outcome::kNewThread) a.thread_id = open_thread(input);
  record_member(a.thread_id, input, false);
  window_.push(input.vector, std::move(input.message_id), a.thread_id);
  return a;
}

std::vector<Assignment> MiniBatchThreadClusterer::push(ClusterInput input) {
  check_dimension(input.vector);
  batch_.push_back(std::move(input));
  if (batch_.size() >= config_.batch_size) return flush();
  return {};
}

namespace {

// Same arithmetic as the window scan: cosine of unit vectors, zero vectors at 2.
double batch_distance(const Eigen::VectorXd& a, bool a_zero, const Eigen::VectorXd& b, bool b_zero) {
  if (a_zero || b_zero) return 2.0;
  return std::clamp(1.0 - a.dot(b), 0.0, 2.0);
}

}  // namespace

std::vector<Assignment> MiniBatchThreadClusterer::flush() {
  const std::size_t n = batch_.size();
  if (n == 0) return {};

  std::vector<Assignment> out(n);
  std::vector<char> decided(n, 0);   // thread or duplicate known
  std::vector<char> threaded(n, 0);  // has a thread id usable as a neighbour
  for (std::size_t i = 0; i < n; ++i) out[i].message_id = batch_[i].message_id;

  if (!window_.empty()) {
    std::vector<FeatureVector> queries;
    queries.reserve(n);
    for (const auto& item : batch_) queries.push_back(item.vector);
    const auto nearest = window_.nearest(queries);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& nn = *nearest[i];
      out[i].distance = nn.distance;
      if (nn.distance < config_.threshold) {
        out[i].thread_id = nn.thread_id;
        out[i].outcome = nn.distance <= config_.duplicate_epsilon ? Outcome::kDuplicate : Outcome::kAssigned;
        decided[i] = 1;
        threaded[i] = out[i].outcome == Outcome::kAssigned;
      } else if (nn.distance <= config_.duplicate_epsilon) {
        // only reachable with threshold == 0
        out[i].thread_id = nn.thread_id;
        out[i].outcome = Outcome::kDuplicate;
        decided[i] = 1;
      }
    }
  }

  std::vector<Eigen::VectorXd> unit(n);
  std::vector<char> zero(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto values = batch_[i].vector.values();
    unit[i] = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    const double norm = unit[i].norm();
    if (norm == 0.0) {
      zero[i] = 1;
    } else {
      unit[i] /= norm;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (decided[i]) continue;
    std::optional<std::size_t> neighbour;
    double best = 2.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !threaded[j]) continue;
      const double d = batch_distance(unit[i], zero[i] != 0, unit[j], zero[j] != 0);
      if (!neighbour || d < best) {
        best = d;
        neighbour = j;
      }
    }
    if (neighbour) {
      out[i].distance = out[i].distance ? std::min(*out[i].distance, best) : best;
    }
    if (neighbour && best < config_.threshold) {
      out[i].thread_id = out[*neighbour].thread_id;
      out[i].outcome = best <= config_.duplicate_epsilon ? Outcome::kDuplicate : Outcome::kAssigned;
    } else {
      out[i].thread_id = open_thread(batch_[i]);
      out[i].outcome = Outcome::kNewThread;
    }
    decided[i] = 1;
    threaded[i] = out[i].outcome != Outcome::kDuplicate;
  }

  std::size_t inserted = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool duplicate = out[i].outcome == Outcome::kDuplicate;
    record_member(out[i].thread_id, batch_[i], duplicate);
    inserted += duplicate ? 0 : 1;
  }
  if (window_.size() + inserted > window_.capacity()) window_.evict_oldest(inserted);
  for (std::size_t i = 0; i < n; ++i) {
    if (out[i].outcome == Outcome::kDuplicate) continue;
    window_.push(batch_[i].vector, std::move(batch_[i].message_id), out[i].thread_id);
  }
  batch_.clear();
  return out;
}

std::unique_ptr<ThreadClusterer> make_clusterer(ClusteringAlgorithm algorithm, std::size_t dimension,
                                                const ClusteringConfig& config) {
  if (algorithm == ClusteringAlgorithm::kOnline) return std::make_unique<OnlineThreadClusterer>(dimension, config);
  return std::make_unique<MiniBatchThreadClusterer>(dimension, config);
}

LatencySeries benchmark_clustering(std::span<const FeatureVector> stream, const ClusteringConfig& config,
                                   ClusteringAlgorithm algorithm) {
  using Clock = std::chrono::steady_clock;
  LatencySeries series;
  if (stream.empty()) return series;
  auto clusterer = make_clusterer(algorithm, stream.front().dimension(), config);

  std::vector<ClusterInput> inputs(stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) {
    inputs[i].message_id = std::to_string(i);
    inputs[i].vector = stream[i];
  }

  series.seconds.assign(stream.size(), 0.0);
  series.window_sizes.assign(stream.size(), 0);
  std::size_t pending_from = 0;
  double pending_time = 0.0;
  auto settle = [&](std::size_t upto, std::size_t completed) {
    // the last `completed` messages before `upto` share the accumulated time
    if (completed == 0) return;
    const double each = pending_time / static_cast<double>(upto - pending_from);
    for (std::size_t j = pending_from; j < upto; ++j) series.seconds[j] = each;
    pending_from = upto;
    pending_time = 0.0;
  };
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto start = Clock::now();
    const auto done = clusterer->push(std::move(inputs[i]));
    pending_time += std::chrono::duration<double>(Clock::now() - start).count();
    settle(i + 1, done.size());
    series.window_sizes[i] = clusterer->window().size();
  }
  {
    const auto start = Clock::now();
    const auto done = clusterer->finish();
    pending_time += std::chrono::duration<double>(Clock::now() - start).count();
    settle(stream.size(), done.size());
    if (!done.empty()) {
      for (std::size_t j = stream.size() - done.size(); j < stream.size(); ++j) {
        series.window_sizes[j] = clusterer->window().size();
      }
    }
  }

  // Batch eviction keeps a mini-batch window within one batch of capacity.
  const std::size_t capacity = clusterer->window().capacity();
  const std::size_t slack =
      algorithm == ClusteringAlgorithm::kMiniBatch ? std::min(config.batch_size, capacity) - 1 : 0;
  series.plateau_start = stream.size();
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (series.window_sizes[i] + slack >= capacity) {
      series.plateau_start = i;
      break;
    }
  }
  const std::size_t m = stream.size() - series.plateau_start;
  if (m > 0) {
    const auto begin = series.seconds.begin() + static_cast<std::ptrdiff_t>(series.plateau_start);
    const double mean = std::accumulate(begin, series.seconds.end(), 0.0) / static_cast<double>(m);
    double var = 0.0;
    for (auto it = begin; it != series.seconds.end(); ++it) var += (*it - mean) * (*it - mean);
    var /= static_cast<double>(m);
    series.plateau_mean = mean;
    series.plateau_cv = mean > 0.0 ? std::sqrt(var) / mean : 0.0;
  }
  return series;
}

}  // namespace newsdet
