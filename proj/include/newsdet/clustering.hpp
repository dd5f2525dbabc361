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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "newsdet/embedding.hpp"

namespace newsdet {

struct ClusteringConfig {
  double threshold = 0.23;  // join a neighbour's thread when distance < threshold
  std::size_t window = 2000;
  std::size_t batch_size = 50;
  double duplicate_epsilon = 1e-9;

  void validate() const;
};

enum class ClusteringAlgorithm { kOnline, kMiniBatch };

ClusteringAlgorithm parse_clustering_algorithm(std::string_view name);
std::string_view to_string(ClusteringAlgorithm algorithm);

enum class Outcome { kAssigned, kNewThread, kDuplicate };

std::string_view to_string(Outcome outcome);

/// Duplicates carry the thread of the buffered message they repeat.
struct Assignment {
  std::string message_id;
  Outcome outcome = Outcome::kNewThread;
  std::size_t thread_id = 0;
  std::optional<double> distance;  // to the deciding neighbour, if any was examined

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct ClusterInput {
  std::string message_id;
  FeatureVector vector;
  std::string author_id;
  std::int64_t timestamp = 0;
  double confidence = 1.0;
  Tokens terms;  // clustering-profile tokens, for thread term statistics
};

/// The sliding set of the most recent non-duplicate messages.
///
/// Vectors are stored unit-normalized, one column per slot of a ring buffer,
/// so a batch of queries is answered with one matrix product. Scans visit
/// entries in insertion order and keep the first minimum, so ties resolve to
/// the earliest-inserted entry.
class Window {
 public:
  struct Entry {
    std::string message_id;
    std::size_t thread_id = 0;
    std::uint64_t sequence = 0;  // insertion counter
  };

  struct Neighbor {
    std::size_t position = 0;  // 0 = oldest entry
    std::size_t thread_id = 0;
    double distance = 2.0;
  };

  Window(std::size_t dimension, std::size_t capacity);

  std::size_t size() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t dimension() const noexcept { return dimension_; }
  bool empty() const noexcept { return size_ == 0; }

  /// Nearest entry for every query; nullopt for all when the window is empty.
  std::vector<std::optional<Neighbor>> nearest(std::span<const FeatureVector> queries) const;
  std::optional<Neighbor> nearest(const FeatureVector& query) const;

  /// Appends, evicting the oldest entry first when full.
  void push(const FeatureVector& vector, std::string message_id, std::size_t thread_id);
  void evict_oldest(std::size_t count);

  /// Entry at insertion position `position` (0 = oldest).
  const Entry& entry(std::size_t position) const;

 private:
  std::size_t slot(std::size_t position) const noexcept { return (head_ + position) % capacity_; }

  std::size_t dimension_;
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
  std::uint64_t next_sequence_ = 0;
  Eigen::MatrixXd columns_;  // dimension x capacity
  std::vector<Entry> entries_;
  std::vector<char> zero_;
};

struct ThreadMember {
  std::string message_id;
  std::string author_id;
  std::int64_t timestamp = 0;
  double confidence = 1.0;
  bool duplicate = false;
};

/// A thread's full membership; outlives the window.
struct Thread {
  std::size_t id = 0;
  std::int64_t created_at = 0;
  std::vector<ThreadMember> members;
  std::map<std::string, std::size_t> term_counts;  // n_i
  std::size_t total_terms = 0;                      // N

  std::size_t size() const noexcept { return members.size(); }
  double unique_author_ratio() const;
  double mean_confidence() const;
  double mean_timestamp() const;
};

/// Common state of both streaming algorithms: the window, the thread
/// registry and the configuration. Single writer.
class ThreadClusterer {
 public:
  ThreadClusterer(std::size_t dimension, const ClusteringConfig& config);
  virtual ~ThreadClusterer() = default;

  /// Returns the assignments this input completes (possibly none for mbTC).
  virtual std::vector<Assignment> push(ClusterInput input) = 0;
  /// Flushes buffered input at end of stream.
  virtual std::vector<Assignment> finish() = 0;

  const Window& window() const noexcept { return window_; }
  const ClusteringConfig& config() const noexcept { return config_; }
  std::size_t thread_count() const noexcept { return threads_.size(); }
  const Thread& thread(std::size_t id) const { return threads_.at(id); }
  /// Immutable snapshot of every thread created so far.
  std::vector<Thread> threads() const { return threads_; }

 protected:
  void check_dimension(const FeatureVector& vector) const;
  std::size_t open_thread(const ClusterInput& input);
  void record_member(std::size_t thread_id, const ClusterInput& input, bool duplicate);

  ClusteringConfig config_;
  Window window_;
  std::vector<Thread> threads_;
};

/// Online thread clustering: one nearest-neighbour decision per message.
class OnlineThreadClusterer final : public ThreadClusterer {
 public:
  using ThreadClusterer::ThreadClusterer;

  Assignment step(ClusterInput input);

  std::vector<Assignment> push(ClusterInput input) override { return {step(std::move(input))}; }
  std::vector<Assignment> finish() override { return {}; }
};

/// Mini-batch thread clustering: buffers `batch_size` messages, matches them
/// against the window, then against already-threaded batch members.
class MiniBatchThreadClusterer final : public ThreadClusterer {
 public:
  using ThreadClusterer::ThreadClusterer;

  std::vector<Assignment> push(ClusterInput input) override;
  std::vector<Assignment> finish() override { return flush(); }

  /// Clusters the pending batch (which may be partial) and empties it.
  std::vector<Assignment> flush();
  std::size_t pending() const noexcept { return batch_.size(); }

 private:
  std::vector<ClusterInput> batch_;
};

std::unique_ptr<ThreadClusterer> make_clusterer(ClusteringAlgorithm algorithm, std::size_t dimension,
                                                const ClusteringConfig& config);

struct LatencySeries {
  std::vector<double> seconds;            // per message
  std::vector<std::size_t> window_sizes;  // |T| after the message was processed
  std::size_t plateau_start = 0;          // first index with a filled window
  double plateau_mean = 0.0;
  double plateau_cv = 0.0;
};

/// Wall-clock time per message. Mini-batch times are amortized evenly over
/// the messages of each batch. The window counts as filled once it holds
/// `window` entries, or for mini-batch more than `window - batch_size`,
/// since batch eviction can leave it short of capacity.
LatencySeries benchmark_clustering(std::span<const FeatureVector> stream, const ClusteringConfig& config,
                                   ClusteringAlgorithm algorithm);

}  // namespace newsdet
