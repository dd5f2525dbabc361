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
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace newsdet {

struct ClusterMetrics {
  double homogeneity = 1.0;
  double completeness = 1.0;
  double v_measure = 1.0;
};

/// Homogeneity, completeness and V-measure of a clustering against a
/// reference partition. Element i belongs to cluster `clusters[i]` and
/// class `truth[i]`. Conditional entropies use natural logs.
ClusterMetrics cluster_metrics(std::span<const std::string> clusters, std::span<const std::string> truth);

/// Map form; both maps must cover the same message ids.
ClusterMetrics cluster_metrics(const std::unordered_map<std::string, std::string>& assignments,
                               const std::unordered_map<std::string, std::string>& truth);

struct DetectionCriterion {
  std::size_t min_candidate_size = 5;
  double min_purity = 0.80;

  void validate() const;
};

struct DetectionMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t matched_candidates = 0;
  std::size_t total_candidates = 0;
  std::size_t detected_events = 0;
  std::size_t total_events = 0;
  bool precision_undefined = false;  // no candidates at all
};

double f1_score(double precision, double recall);

/// Scores candidate member lists against eligible ground-truth events. A
/// candidate detects event e when it has at least `min_candidate_size`
/// members and at least `min_purity` of them are labeled e; members without
/// a truth entry count against purity. Only the plurality event is
/// considered, so a candidate matches at most one event at any purity.
DetectionMetrics match_detections(std::span<const std::vector<std::string>> candidates,
                                  const std::unordered_map<std::string, std::string>& truth,
                                  std::size_t total_events, const DetectionCriterion& criterion);

}  // namespace newsdet
