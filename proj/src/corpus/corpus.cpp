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

#include "newsdet/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "newsdet/error.hpp"

namespace newsdet {
namespace {

using nlohmann::json;

std::optional<std::int64_t> parse_timestamp(std::string_view s) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

struct Record {
  Message message;
  std::optional<std::string> event_id;
  bool declares_event = false;
};

std::optional<std::string> string_field(const json& object, const char* key) {
  auto it = object.find(key);
  if (it == object.end()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
  return std::nullopt;
}

std::optional<Record> parse_json_line(const std::string& line) {
  json object = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (!object.is_object()) return std::nullopt;
  Record record;
  auto id = string_field(object, "id");
  auto author = string_field(object, "author_id");
  auto text = object.find("text");
  auto ts = object.find("timestamp");
  if (!id || !author || text == object.end() || !text->is_string() || ts == object.end()) return std::nullopt;
  if (ts->is_number_integer()) {
    record.message.timestamp = ts->get<std::int64_t>();
  } else if (ts->is_string()) {
    auto parsed = parse_timestamp(ts->get<std::string>());
    if (!parsed) return std::nullopt;
    record.message.timestamp = *parsed;
  } else {
    return std::nullopt;
  }
  record.message.id = *id;
  record.message.author_id = *author;
  record.message.text = text->get<std::string>();
  if (auto ev = object.find("event_id"); ev != object.end()) {
    record.declares_event = true;
    if (!ev->is_null()) {
      auto value = string_field(object, "event_id");
      if (!value) return std::nullopt;
      if (!value->empty()) record.event_id = std::move(value);
    }
  }
  return record;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find('\t', start);
    fields.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

std::optional<Record> parse_tsv_line(std::string_view line, bool has_event_column) {
  auto fields = split_tabs(line);
  const std::size_t expected = has_event_column ? 5 : 4;
  if (fields.size() != expected) return std::nullopt;
  auto ts = parse_timestamp(fields[2]);
  if (!ts) return std::nullopt;
  Record record;
  record.message = Message{std::string(fields[0]), std::string(fields[1]), *ts, std::string(fields[3])};
  record.declares_event = has_event_column;
  if (has_event_column && !fields[4].empty()) record.event_id = std::string(fields[4]);
  return record;
}

bool valid_message(const Message& m) { return !m.id.empty() && m.timestamp >= 0; }

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

}  // namespace

Corpus::Corpus(std::vector<Message> messages) : Corpus(std::move(messages), {}, false) {}

Corpus::Corpus(std::vector<Message> messages, std::vector<Label> labels, bool labeled) : labeled_(labeled) {
  if (labels.empty()) labels.resize(messages.size());
  if (labels.size() != messages.size()) {
    fail(ErrorCode::kInvalidArgument, "corpus: label count does not match message count");
  }
  std::unordered_set<std::string_view> ids;
  ids.reserve(messages.size());
  for (const auto& m : messages) {
    if (m.id.empty()) fail(ErrorCode::kInvalidArgument, "corpus: empty message id");
    if (m.timestamp < 0) fail(ErrorCode::kInvalidArgument, "corpus: negative timestamp for message " + m.id);
    if (!ids.insert(m.id).second) fail(ErrorCode::kInvalidArgument, "corpus: duplicate message id " + m.id);
  }
  std::vector<std::size_t> order(messages.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return messages[a].timestamp < messages[b].timestamp;
  });
  messages_.reserve(messages.size());
  labels_.reserve(messages.size());
  for (std::size_t i : order) {
    messages_.push_back(std::move(messages[i]));
    labels_.push_back(std::move(labels[i]));
  }
}

std::vector<std::pair<std::string, std::size_t>> Corpus::event_sizes() const {
  std::vector<std::pair<std::string, std::size_t>> sizes;
  std::unordered_map<std::string, std::size_t> slot;
  for (const auto& label : labels_) {
    if (!label.is_event()) continue;
    auto [it, inserted] = slot.try_emplace(*label.event_id, sizes.size());
    if (inserted) sizes.emplace_back(*label.event_id, 0);
    ++sizes[it->second].second;
  }
  return sizes;
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "jsonl" || name == "json") return CorpusFormat::kJsonLines;
  if (name == "tsv") return CorpusFormat::kTsv;
  fail(ErrorCode::kInvalidArgument, "unknown corpus format '" + std::string(name) + "' (expected jsonl or tsv)");
}

std::string_view to_string(CorpusFormat format) {
  return format == CorpusFormat::kTsv ? "tsv" : "jsonl";
}

CorpusLoadResult load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot read corpus file " + path.string());

  std::vector<Message> messages;
  std::vector<Label> labels;
  std::unordered_set<std::string> ids;
  bool labeled = false;
  std::size_t skipped = 0;

  std::string line;
  bool tsv_has_event = false;
  if (format == CorpusFormat::kTsv) {
    bool header_found = false;
    while (std::getline(in, line)) {
      strip_cr(line);
      if (blank(line)) continue;
      auto header = split_tabs(line);
      const bool base = header.size() >= 4 && header[0] == "id" && header[1] == "author_id" &&
                        header[2] == "timestamp" && header[3] == "text";
      if (!base || header.size() > 5 || (header.size() == 5 && header[4] != "event_id")) {
        fail(ErrorCode::kParse, "corpus " + path.string() +
                                    ": TSV header must be 'id author_id timestamp text [event_id]'");
      }
      tsv_has_event = header.size() == 5;
      labeled = tsv_has_event;
      header_found = true;
      break;
    }
    if (!header_found) fail(ErrorCode::kParse, "corpus " + path.string() + ": zero parseable records");
  }

  while (std::getline(in, line)) {
    strip_cr(line);
    if (blank(line)) continue;
    auto record = format == CorpusFormat::kTsv ? parse_tsv_line(line, tsv_has_event) : parse_json_line(line);
    if (!record || !valid_message(record->message) || ids.contains(record->message.id)) {
      ++skipped;
      continue;
    }
    labeled = labeled || record->declares_event;
    ids.insert(record->message.id);
    labels.push_back(record->event_id ? Label::event(*record->event_id) : Label::not_event());
    messages.push_back(std::move(record->message));
  }
  if (messages.empty()) fail(ErrorCode::kParse, "corpus " + path.string() + ": zero parseable records");
  return {Corpus(std::move(messages), std::move(labels), labeled), skipped};
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write corpus file " + path.string());
  if (format == CorpusFormat::kTsv) {
    out << "id\tauthor_id\ttimestamp\ttext" << (corpus.labeled() ? "\tevent_id" : "") << '\n';
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& m = corpus.message(i);
    const auto& label = corpus.label(i);
    if (format == CorpusFormat::kTsv) {
      if (m.text.find_first_of("\t\n") != std::string::npos) {
        fail(ErrorCode::kInvalidArgument, "message " + m.id + " contains a tab or newline; use jsonl");
      }
      out << m.id << '\t' << m.author_id << '\t' << m.timestamp << '\t' << m.text;
      if (corpus.labeled()) out << '\t' << label.event_id.value_or("");
      out << '\n';
    } else {
      nlohmann::ordered_json record;
      record["id"] = m.id;
      record["author_id"] = m.author_id;
      record["timestamp"] = m.timestamp;
      record["text"] = m.text;
      if (corpus.labeled()) {
        record["event_id"] = label.event_id ? json(*label.event_id) : json(nullptr);
      }
      out << record.dump() << '\n';
    }
  }
  if (!out) fail(ErrorCode::kIo, "failed writing corpus file " + path.string());
}

Corpus apply_label_policy(const Corpus& corpus, const std::set<std::string>& sport_event_ids) {
  std::vector<Message> messages(corpus.messages().begin(), corpus.messages().end());
  std::vector<Label> labels;
  labels.reserve(corpus.size());
  for (const auto& label : corpus.labels()) {
    if (label.is_event() && !sport_event_ids.contains(*label.event_id)) {
      labels.push_back(label);
    } else {
      labels.push_back(Label::not_event());
    }
  }
  return Corpus(std::move(messages), std::move(labels), true);
}

void SplitSpec::validate() const {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "split.test_fraction must lie in (0, 1)");
  }
  if (min_event_size > max_event_size) {
    fail(ErrorCode::kInvalidArgument, "split.min_event_size must not exceed split.max_event_size");
  }
}

CorpusSplit make_split(const Corpus& corpus, const SplitSpec& spec) {
  spec.validate();
  if (!corpus.labeled()) fail(ErrorCode::kPrecondition, "make_split requires a labeled corpus");

  std::mt19937_64 rng(spec.seed);
  std::vector<char> to_test(corpus.size(), 0);
  std::size_t test_size = 0;

  std::bernoulli_distribution coin(spec.test_fraction);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!corpus.label(i).is_event() && coin(rng)) {
      to_test[i] = 1;
      ++test_size;
    }
  }

  auto sizes = corpus.event_sizes();
  std::vector<std::pair<std::string, std::size_t>> eligible;
  for (const auto& entry : sizes) {
    if (entry.second >= spec.min_event_size && entry.second <= spec.max_event_size) eligible.push_back(entry);
  }
  if (eligible.empty()) fail(ErrorCode::kPrecondition, "corpus too small to satisfy split: no eligible events");
  std::shuffle(eligible.begin(), eligible.end(), rng);

  const double target = spec.test_fraction * static_cast<double>(corpus.size());
  std::set<std::string> test_events;
  for (const auto& [event, size] : eligible) {
    if (static_cast<double>(test_size) >= target && !test_events.empty()) break;
    test_events.insert(event);
    test_size += size;
  }
  if (static_cast<double>(test_size) < target) {
    fail(ErrorCode::kPrecondition, "corpus too small to satisfy split.test_fraction");
  }
  if (test_events.size() == sizes.size()) {
    fail(ErrorCode::kPrecondition, "corpus too small to satisfy split.test_fraction: no events left for training");
  }

  std::vector<Message> train_messages, test_messages;
  std::vector<Label> train_labels, test_labels;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& label = corpus.label(i);
    const bool test = label.is_event() ? test_events.contains(*label.event_id) : to_test[i] != 0;
    (test ? test_messages : train_messages).push_back(corpus.message(i));
    (test ? test_labels : train_labels).push_back(label);
  }
  return {Corpus(std::move(train_messages), std::move(train_labels), true),
          Corpus(std::move(test_messages), std::move(test_labels), true),
          std::vector<std::string>(test_events.begin(), test_events.end())};
}

}  // namespace newsdet
