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

#include "newsdet/corpus.hpp"
#include "newsdet/embedding.hpp"

namespace newsdet {

/// Planted-event corpus generator.
///
/// Every event owns a disjoint topical vocabulary whose embeddings share the
/// event's centroid direction plus a common "news" style direction; noise
/// messages draw from a broad background vocabulary aligned with a separate
/// "chatter" direction. Messages are padded with stopwords, mentions, URLs,
/// numbers, hashtags and capitalized tokens so that both preprocessing
/// profiles have something to do.
struct SyntheticConfig {
  std::uint64_t seed = 0;
  std::size_t events = 20;
  std::size_t messages_per_event = 30;
  std::size_t noise_messages = 600;
  std::size_t vocab_per_event = 120;
  std::size_t background_vocab = 3000;
  std::size_t dimension = 64;
  std::int64_t start_time = 1349049600;  // 2012-10-01T00:00:00Z
  std::int64_t time_span = 4 * 86400;
  std::int64_t event_duration = 8 * 3600;
  std::size_t min_content_tokens = 7;
  std::size_t max_content_tokens = 11;
  std::size_t min_stopwords = 2;
  std::size_t max_stopwords = 6;
  std::size_t authors = 20000;
  double topic_weight = 1.0;
  double style_weight = 1.5;
  double word_noise = 2.0;
  double stopword_weight = 1.0;  // shared stopword direction
  double stopword_noise = 2.0;
  double decoration_rate = 0.25;  // per-message chance of each extra (mention, url, number, ...)

  void validate() const;
};

struct SyntheticCorpus {
  Corpus corpus;
  EmbeddingTable embeddings;
};

SyntheticCorpus generate_synthetic(const SyntheticConfig& config);

}  // namespace newsdet
