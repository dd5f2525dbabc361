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

#include "newsdet/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "newsdet/error.hpp"

namespace newsdet {

void RankingConfig::validate() const {
  auto ratio = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) fail(ErrorCode::kInvalidArgument, std::string(name) + " must lie in [0, 1]");
  };
  ratio(min_mean_confidence, "ranking.min_mean_confidence");
  ratio(min_unique_author_ratio, "ranking.min_unique_author_ratio");
  if (top_k_size == 0 || top_k_growth == 0 || final_k == 0) {
    fail(ErrorCode::kInvalidArgument, "ranking counts must be positive");
  }
  if (recency_window <= 0) fail(ErrorCode::kInvalidArgument, "ranking.recency_window must be positive");
  if (growth_horizon <= 0) fail(ErrorCode::kInvalidArgument, "ranking.growth_horizon must be positive");
  if (!std::isfinite(min_entropy)) fail(ErrorCode::kInvalidArgument, "ranking.min_entropy must be finite");
}

std::string_view to_string(SelectionReason reason) {
  return reason == SelectionReason::kBySize ? "size" : "growth";
}

double entropy_of_counts(std::span<const std::size_t> counts) {
  std::size_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) fail(ErrorCode::kPrecondition, "entropy of an empty term multiset");
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h == 0.0 ? 0.0 : h;
}

double event_entropy(const Thread& thread) {
  std::vector<std::size_t> counts;
  counts.reserve(thread.term_counts.size());
  for (const auto& [term, n] : thread.term_counts) counts.push_back(n);
  return entropy_of_counts(counts);
}

double growth_rate(const Thread& thread, std::int64_t now, std::int64_t horizon) {
  long recent = 0;
  long previous = 0;
  for (const auto& m : thread.members) {
    if (m.timestamp >= now - horizon && m.timestamp <= now) {
      ++recent;
    } else if (m.timestamp >= now - 2 * horizon && m.timestamp < now - horizon) {
      ++previous;
    }
  }
  return static_cast<double>(recent - previous);
}

std::vector<CandidateEvent> select_candidates(std::span<const Thread> threads, const RankingConfig& config,
                                              std::int64_t now) {
  config.validate();
  std::vector<CandidateEvent> pool;
  for (const auto& thread : threads) {
    if (thread.size() <= config.min_size) continue;
    CandidateEvent c;
    c.thread_id = thread.id;
    c.size = thread.size();
    c.mean_confidence = thread.mean_confidence();
    c.unique_author_ratio = thread.unique_author_ratio();
    c.mean_timestamp = thread.mean_timestamp();
    if (c.mean_confidence < config.min_mean_confidence) continue;
    if (c.mean_timestamp < static_cast<double>(now - config.recency_window)) continue;
    if (c.unique_author_ratio < config.min_unique_author_ratio) continue;
    c.growth_rate = growth_rate(thread, now, config.growth_horizon);
    c.entropy = thread.total_terms == 0 ? 0.0 : event_entropy(thread);
    c.members.reserve(thread.members.size());
    for (const auto& m : thread.members) c.members.push_back(m.message_id);
    pool.push_back(std::move(c));
  }

  std::vector<std::size_t> by_size(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) by_size[i] = i;
  std::vector<std::size_t> by_growth = by_size;
  std::sort(by_size.begin(), by_size.end(), [&](std::size_t a, std::size_t b) {
    if (pool[a].size != pool[b].size) return pool[a].size > pool[b].size;
    return pool[a].thread_id < pool[b].thread_id;
  });
  std::sort(by_growth.begin(), by_growth.end(), [&](std::size_t a, std::size_t b) {
    if (pool[a].growth_rate != pool[b].growth_rate) return pool[a].growth_rate > pool[b].growth_rate;
    return pool[a].thread_id < pool[b].thread_id;
  });

  std::vector<char> taken(pool.size(), 0);
  std::vector<CandidateEvent> picked;
  for (std::size_t i = 0; i < by_size.size() && i < config.top_k_size; ++i) {
    taken[by_size[i]] = 1;
    pool[by_size[i]].reason = SelectionReason::kBySize;
    picked.push_back(pool[by_size[i]]);
  }
  std::size_t growth_taken = 0;
  for (std::size_t idx : by_growth) {
    if (growth_taken == config.top_k_growth || pool[idx].growth_rate <= 0.0) break;
    ++growth_taken;
    if (taken[idx]) continue;
    taken[idx] = 1;
    pool[idx].reason = SelectionReason::kByGrowth;
    picked.push_back(pool[idx]);
  }

  std::erase_if(picked, [&](const CandidateEvent& c) { return c.entropy < config.min_entropy; });
  std::sort(picked.begin(), picked.end(), [](const CandidateEvent& a, const CandidateEvent& b) {
    if (a.entropy != b.entropy) return a.entropy > b.entropy;
    if (a.size != b.size) return a.size > b.size;
    return a.thread_id < b.thread_id;
  });
  if (picked.size() > config.final_k) picked.resize(config.final_k);
  return picked;
}

std::vector<std::pair<std::string, std::size_t>> top_terms(const Thread& thread, std::size_t k) {
  std::vector<std::pair<std::string, std::size_t>> terms(thread.term_counts.begin(), thread.term_counts.end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (terms.size() > k) terms.resize(k);
  return terms;
}

}  // namespace newsdet
