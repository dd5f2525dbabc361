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

#include "newsdet/evaluation.hpp"

#include <cmath>
#include <map>

#include "newsdet/error.hpp"

namespace newsdet {

namespace {

double entropy(const std::unordered_map<std::size_t, std::size_t>& counts, double n) {
  double h = 0.0;
  for (const auto& [key, c] : counts) {
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  return h;
}

// Dense ids in first-appearance order.
std::vector<std::size_t> encode(std::span<const std::string> labels) {
  std::unordered_map<std::string_view, std::size_t> ids;
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (const auto& label : labels) out.push_back(ids.try_emplace(label, ids.size()).first->second);
  return out;
}

}  // namespace

ClusterMetrics cluster_metrics(std::span<const std::string> clusters, std::span<const std::string> truth) {
  if (clusters.empty()) fail(ErrorCode::kInvalidArgument, "cluster metrics need at least one element");
  if (clusters.size() != truth.size()) {
    fail(ErrorCode::kInvalidArgument, "cluster and truth assignments differ in length");
  }
  const auto k = encode(clusters);
  const auto c = encode(truth);
  const double n = static_cast<double>(k.size());

  std::unordered_map<std::size_t, std::size_t> nk, nc;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> joint;
  for (std::size_t i = 0; i < k.size(); ++i) {
    ++nk[k[i]];
    ++nc[c[i]];
    ++joint[{c[i], k[i]}];
  }
  const double h_c = entropy(nc, n);
  const double h_k = entropy(nk, n);
  double h_c_given_k = 0.0;
  double h_k_given_c = 0.0;
  for (const auto& [key, a] : joint) {
    const double an = static_cast<double>(a);
    h_c_given_k -= an / n * std::log(an / static_cast<double>(nk[key.second]));
    h_k_given_c -= an / n * std::log(an / static_cast<double>(nc[key.first]));
  }

  ClusterMetrics m;
  m.homogeneity = h_c == 0.0 ? 1.0 : 1.0 - h_c_given_k / h_c;
  m.completeness = h_k == 0.0 ? 1.0 : 1.0 - h_k_given_c / h_k;
  m.v_measure = m.homogeneity + m.completeness == 0.0
                    ? 0.0
                    : 2.0 * m.homogeneity * m.completeness / (m.homogeneity + m.completeness);
  return m;
}

ClusterMetrics cluster_metrics(const std::unordered_map<std::string, std::string>& assignments,
                               const std::unordered_map<std::string, std::string>& truth) {
  if (assignments.size() != truth.size()) {
    fail(ErrorCode::kInvalidArgument, "assignment and truth maps cover different messages");
  }
  std::map<std::string_view, std::pair<std::string_view, std::string_view>> ordered;
  for (const auto& [id, cluster] : assignments) {
    auto it = truth.find(id);
    if (it == truth.end()) fail(ErrorCode::kInvalidArgument, "message '" + id + "' has no truth label");
    ordered.emplace(id, std::pair{std::string_view(cluster), std::string_view(it->second)});
  }
  std::vector<std::string> k, c;
  k.reserve(ordered.size());
  c.reserve(ordered.size());
  for (const auto& [id, pair] : ordered) {
    k.emplace_back(pair.first);
    c.emplace_back(pair.second);
  }
  return cluster_metrics(k, c);
}

void DetectionCriterion::validate() const {
  if (!(min_purity > 0.0 && min_purity <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "detection.min_purity must lie in (0, 1]");
  }
}

double f1_score(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

DetectionMetrics match_detections(std::span<const std::vector<std::string>> candidates,
                                  const std::unordered_map<std::string, std::string>& truth,
                                  std::size_t total_events, const DetectionCriterion& criterion) {
  criterion.validate();
  DetectionMetrics m;
  m.total_candidates = candidates.size();
  m.total_events = total_events;
  std::unordered_map<std::string, std::size_t> detected;
  for (const auto& members : candidates) {
    if (members.empty() || members.size() < criterion.min_candidate_size) continue;
    std::map<std::string_view, std::size_t> votes;
    for (const auto& id : members) {
      auto it = truth.find(id);
      if (it != truth.end()) ++votes[it->second];
    }
    if (votes.empty()) continue;
    // Plurality event, ties to the smallest label.
    auto best = votes.begin();
    for (auto it = votes.begin(); it != votes.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    if (static_cast<double>(best->second) >= criterion.min_purity * static_cast<double>(members.size())) {
      ++m.matched_candidates;
      ++detected[std::string(best->first)];
    }
  }
  m.detected_events = detected.size();
  m.precision_undefined = m.total_candidates == 0;
  m.precision = m.precision_undefined ? 0.0
                                      : static_cast<double>(m.matched_candidates) /
                                            static_cast<double>(m.total_candidates);
  m.recall = total_events == 0 ? 0.0 : static_cast<double>(m.detected_events) / static_cast<double>(total_events);
  m.f1 = f1_score(m.precision, m.recall);
  return m;
}

}  // namespace newsdet
