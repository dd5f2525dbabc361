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
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace newsdet {

struct Message {
  std::string id;
  std::string author_id;
  std::int64_t timestamp = 0;  // seconds since epoch
  std::string text;

  friend bool operator==(const Message&, const Message&) = default;
};

/// Binary class used by the classifier.
enum class MessageClass { kNotEvent = 0, kEvent = 1 };

/// Ground truth for one message. Event labels carry the event id used as the
/// clustering ground truth.
struct Label {
  std::optional<std::string> event_id;

  static Label event(std::string id) { return Label{std::move(id)}; }
  static Label not_event() { return Label{}; }

  bool is_event() const noexcept { return event_id.has_value(); }
  MessageClass message_class() const noexcept {
    return is_event() ? MessageClass::kEvent : MessageClass::kNotEvent;
  }

  friend bool operator==(const Label&, const Label&) = default;
};

/// An immutable, timestamp-ordered message collection with optional labels.
///
/// Construction validates ids (non-empty, unique) and timestamps (>= 0) and
/// stable-sorts by timestamp, so records sharing a timestamp keep their input
/// order.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<Message> messages, std::vector<Label> labels, bool labeled);
  explicit Corpus(std::vector<Message> messages);

  std::span<const Message> messages() const noexcept { return messages_; }
  std::span<const Label> labels() const noexcept { return labels_; }
  const Message& message(std::size_t i) const { return messages_.at(i); }
  const Label& label(std::size_t i) const { return labels_.at(i); }

  std::size_t size() const noexcept { return messages_.size(); }
  bool empty() const noexcept { return messages_.empty(); }
  bool labeled() const noexcept { return labeled_; }

  /// Distinct event ids with their message counts, ordered by first appearance.
  std::vector<std::pair<std::string, std::size_t>> event_sizes() const;

 private:
  std::vector<Message> messages_;
  std::vector<Label> labels_;
  bool labeled_ = false;
};

enum class CorpusFormat { kJsonLines, kTsv };

CorpusFormat parse_corpus_format(std::string_view name);
std::string_view to_string(CorpusFormat format);

struct CorpusLoadResult {
  Corpus corpus;
  std::size_t skipped = 0;  // malformed records
};

/// Reads a line-delimited corpus file.
///
/// JSON lines: one flat object per line with `id`, `author_id`, `timestamp`,
/// `text` and an optional `event_id`. TSV: a required header naming the same
/// columns in that order (`event_id` optional), then one record per line.
/// Blank lines are ignored; every other unparseable line is counted in
/// `skipped`. The corpus is labeled when the file declares `event_id` anywhere.
CorpusLoadResult load_corpus(const std::filesystem::path& path, CorpusFormat format);

void write_corpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format);

/// Sport events and unlabeled messages collapse to NotEvent; every other
/// event label is kept. Idempotent.
Corpus apply_label_policy(const Corpus& corpus, const std::set<std::string>& sport_event_ids);

struct SplitSpec {
  std::uint64_t seed = 0;
  double test_fraction = 0.3;
  std::size_t min_event_size = 10;
  std::size_t max_event_size = 400;

  void validate() const;
};

struct CorpusSplit {
  Corpus train;
  Corpus test;
  std::vector<std::string> test_events;  // eligible events placed on the test side, sorted
};

/// Event-level train/test split.
///
/// Non-event messages go to the test side independently with probability
/// `test_fraction`. Eligible events (size within [min_event_size,
/// max_event_size]) are then moved to the test side whole, in seeded random
/// order, until the test side holds at least `test_fraction` of the corpus.
/// Ineligible events always stay on the training side.
CorpusSplit make_split(const Corpus& corpus, const SplitSpec& spec);

/// Pull-based, single-consumer replay in corpus (timestamp) order.
class Replay {
 public:
  explicit Replay(const Corpus& corpus) : corpus_(&corpus) {}

  /// Next message, or nullptr at end of stream.
  const Message* next() noexcept {
    if (position_ >= corpus_->size()) return nullptr;
    return &corpus_->messages()[position_++];
  }

  /// Index of the message most recently returned by next().
  std::size_t index() const noexcept { return position_ - 1; }
  std::size_t remaining() const noexcept { return corpus_->size() - position_; }

 private:
  const Corpus* corpus_;
  std::size_t position_ = 0;
};

}  // namespace newsdet
