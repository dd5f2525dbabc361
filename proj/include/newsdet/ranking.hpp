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
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "newsdet/clustering.hpp"

namespace newsdet {

struct RankingConfig {
  std::size_t top_k_size = 100;
  std::size_t top_k_growth = 100;
  std::size_t min_size = 5;  // exclusive
  double min_mean_confidence = 0.85;
  std::int64_t recency_window = 24 * 3600;
  double min_unique_author_ratio = 0.85;
  double min_entropy = 5.0;
  std::size_t final_k = 20;
  std::int64_t growth_horizon = 3600;

  void validate() const;
};

enum class SelectionReason { kBySize, kByGrowth };

std::string_view to_string(SelectionReason reason);

struct CandidateEvent {
  std::size_t thread_id = 0;
  std::vector<std::string> members;
  std::size_t size = 0;
  double growth_rate = 0.0;
  double entropy = 0.0;
  double mean_confidence = 0.0;
  double unique_author_ratio = 0.0;
  double mean_timestamp = 0.0;
  SelectionReason reason = SelectionReason::kBySize;
};

/// Natural-log Shannon entropy of a term-count distribution.
double entropy_of_counts(std::span<const std::size_t> counts);
double event_entropy(const Thread& thread);

/// Arrivals in [now - horizon, now] minus arrivals in [now - 2 horizon, now - horizon).
double growth_rate(const Thread& thread, std::int64_t now, std::int64_t horizon);

/// Filters, picks the largest and fastest-growing threads, drops
/// low-entropy ones and returns the `final_k` highest-entropy candidates
/// (entropy desc, then size desc, then thread id asc).
std::vector<CandidateEvent> select_candidates(std::span<const Thread> threads, const RankingConfig& config,
                                              std::int64_t now);

/// Most frequent terms, count desc then lexicographic.
std::vector<std::pair<std::string, std::size_t>> top_terms(const Thread& thread, std::size_t k);

}  // namespace newsdet
