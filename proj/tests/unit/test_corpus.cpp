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
#include <set>

#include <gtest/gtest.h>

#include "newsdet/corpus.hpp"
#include "newsdet/error.hpp"
#include "newsdet/synthetic.hpp"
#include "test_support.hpp"

namespace newsdet {
namespace {

using testing::TempDir;

Corpus labeled(std::vector<std::pair<std::string, std::optional<std::string>>> rows) {
  std::vector<Message> messages;
  std::vector<Label> labels;
  std::int64_t t = 100;
  for (auto& [id, event] : rows) {
    messages.push_back({id, "a" + id, t++, "text " + id});
    labels.push_back(event ? Label::event(*event) : Label::not_event());
  }
  return Corpus(std::move(messages), std::move(labels), true);
}

// Events of the given sizes plus `noise` unlabeled messages, interleaved in time.
Corpus event_corpus(const std::vector<std::size_t>& sizes, std::size_t noise, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> ts(0, 100000);
  std::vector<Message> messages;
  std::vector<Label> labels;
  std::size_t n = 0;
  for (std::size_t e = 0; e < sizes.size(); ++e) {
    for (std::size_t k = 0; k < sizes[e]; ++k) {
      messages.push_back({"m" + std::to_string(n++), "u", ts(rng), "x"});
      labels.push_back(Label::event("e" + std::to_string(e)));
    }
  }
  for (std::size_t k = 0; k < noise; ++k) {
    messages.push_back({"m" + std::to_string(n++), "u", ts(rng), "x"});
    labels.push_back(Label::not_event());
  }
  return Corpus(std::move(messages), std::move(labels), true);
}

TEST(Corpus, RejectsBadRecords) {
  EXPECT_THROW(Corpus({{"", "a", 1, "x"}}), Error);
  EXPECT_THROW(Corpus({{"a", "a", -1, "x"}}), Error);
  EXPECT_THROW(Corpus({{"a", "a", 1, "x"}, {"a", "b", 2, "y"}}), Error);
}

TEST(Corpus, StableSortByTimestamp) {
  Corpus c({{"late", "u", 9, ""}, {"tie1", "u", 5, ""}, {"early", "u", 1, ""}, {"tie2", "u", 5, ""}});
  std::vector<std::string> ids;
  for (const auto& m : c.messages()) ids.push_back(m.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"early", "tie1", "tie2", "late"}));
}

TEST(LoadCorpus, JsonLinesSkipsMalformed) {
  TempDir dir;
  const auto path = dir.write("c.jsonl",
                              "{\"id\":\"1\",\"author_id\":\"a\",\"timestamp\":30,\"text\":\"c\"}\n"
                              "{\"id\":\"2\",\"author_id\":\"b\",\"timestamp\":10,\"text\":\"a\"}\n"
                              "not json at all\n"
                              "\n"
                              "{\"id\":3,\"author_id\":\"c\",\"timestamp\":\"20\",\"text\":\"b\"}\n");
  const auto r = load_corpus(path, CorpusFormat::kJsonLines);
  EXPECT_EQ(r.corpus.size(), 3u);
  EXPECT_EQ(r.skipped, 1u);
  EXPECT_FALSE(r.corpus.labeled());
  EXPECT_EQ(r.corpus.message(0).id, "2");
  EXPECT_EQ(r.corpus.message(1).id, "3");
  EXPECT_EQ(r.corpus.message(2).id, "1");
}

TEST(LoadCorpus, JsonLinesLabels) {
  TempDir dir;
  const auto path = dir.write("c.jsonl",
                              "{\"id\":\"1\",\"author_id\":\"a\",\"timestamp\":1,\"text\":\"x\",\"event_id\":\"e1\"}\n"
                              "{\"id\":\"2\",\"author_id\":\"a\",\"timestamp\":2,\"text\":\"y\",\"event_id\":null}\n");
  const auto r = load_corpus(path, CorpusFormat::kJsonLines);
  ASSERT_TRUE(r.corpus.labeled());
  EXPECT_EQ(r.corpus.label(0), Label::event("e1"));
  EXPECT_EQ(r.corpus.label(1), Label::not_event());
}

TEST(LoadCorpus, TsvNeedsHeader) {
  TempDir dir;
  const auto ok = dir.write("ok.tsv",
                            "id\tauthor_id\ttimestamp\ttext\tevent_id\n"
                            "1\ta\t5\thello world\te1\n"
                            "2\tb\tbad\tbroken\t\n"
                            "3\tc\t4\tearlier\t\n");
  const auto r = load_corpus(ok, CorpusFormat::kTsv);
  EXPECT_EQ(r.corpus.size(), 2u);
  EXPECT_EQ(r.skipped, 1u);
  EXPECT_EQ(r.corpus.message(0).id, "3");
  EXPECT_EQ(r.corpus.label(0), Label::not_event());
  EXPECT_EQ(r.corpus.label(1), Label::event("e1"));

  const auto headless = dir.write("nohead.tsv", "1\ta\t5\thello\n");
  EXPECT_THROW(load_corpus(headless, CorpusFormat::kTsv), Error);
}

TEST(LoadCorpus, EmptyAndMissing) {
  TempDir dir;
  const auto empty = dir.write("empty.jsonl", "");
  try {
    load_corpus(empty, CorpusFormat::kJsonLines);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("zero parseable records"), std::string::npos);
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
  try {
    load_corpus(dir / "missing.jsonl", CorpusFormat::kJsonLines);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(LoadCorpus, RoundTripBothFormats) {
  TempDir dir;
  const auto c = labeled({{"a", "e1"}, {"b", std::nullopt}, {"c", "e2"}});
  for (auto format : {CorpusFormat::kJsonLines, CorpusFormat::kTsv}) {
    const auto path = dir / ("rt." + std::string(to_string(format)));
    write_corpus(c, path, format);
    const auto back = load_corpus(path, format);
    EXPECT_EQ(back.skipped, 0u);
    ASSERT_EQ(back.corpus.size(), c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      EXPECT_EQ(back.corpus.message(i), c.message(i));
      EXPECT_EQ(back.corpus.label(i), c.label(i));
    }
  }
}

TEST(LabelPolicy, SportAndUnlabeledCollapse) {
  const auto c = labeled({{"a", "e1"}, {"b", "sport1"}, {"c", std::nullopt}});
  const auto p = apply_label_policy(c, {"sport1"});
  EXPECT_EQ(p.label(0).message_class(), MessageClass::kEvent);
  EXPECT_EQ(p.label(0).event_id, "e1");
  EXPECT_EQ(p.label(1).message_class(), MessageClass::kNotEvent);
  EXPECT_EQ(p.label(2).message_class(), MessageClass::kNotEvent);
}

TEST(LabelPolicy, Idempotent) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<std::string, std::optional<std::string>>> rows;
    std::uniform_int_distribution<int> ev(-1, 5);
    for (int i = 0; i < 40; ++i) {
      const int e = ev(rng);
      rows.emplace_back("m" + std::to_string(i), e < 0 ? std::nullopt : std::optional("e" + std::to_string(e)));
    }
    const std::set<std::string> sport{"e1", "e4"};
    const auto once = apply_label_policy(labeled(rows), sport);
    const auto twice = apply_label_policy(once, sport);
    for (std::size_t i = 0; i < once.size(); ++i) EXPECT_EQ(once.label(i), twice.label(i));
  }
}

TEST(Split, DeterministicForSeed) {
  const auto c = event_corpus({12, 15, 20, 30, 11, 14}, 60);
  SplitSpec spec;
  spec.seed = 7;
  const auto a = make_split(c, spec);
  const auto b = make_split(c, spec);
  ASSERT_EQ(a.test.size(), b.test.size());
  for (std::size_t i = 0; i < a.test.size(); ++i) EXPECT_EQ(a.test.message(i), b.test.message(i));
  EXPECT_EQ(a.test_events, b.test_events);
}

TEST(Split, SizeBoundsExcludeEvents) {
  // e0 has 8 messages (< 10), e1 has 401 (> 400): neither may reach the test side.
  const auto c = event_corpus({8, 401, 60, 70, 80, 90}, 100);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SplitSpec spec;
    spec.seed = seed;
    const auto s = make_split(c, spec);
    for (const auto& l : s.test.labels()) {
      if (l.is_event()) {
        EXPECT_NE(*l.event_id, "e0");
        EXPECT_NE(*l.event_id, "e1");
      }
    }
  }
}

TEST(Split, PropertyInvariants) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> size(2, 60), count(3, 12), noise(0, 200);
    std::vector<std::size_t> sizes(count(rng));
    for (auto& s : sizes) s = size(rng);
    sizes.push_back(15);  // at least one eligible event
    const auto c = event_corpus(sizes, noise(rng), seed);
    SplitSpec spec;
    spec.seed = seed;
    spec.test_fraction = 0.3;
    CorpusSplit s;
    try {
      s = make_split(c, spec);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kPrecondition);
      continue;
    }
    EXPECT_EQ(s.train.size() + s.test.size(), c.size());
    EXPECT_GE(static_cast<double>(s.test.size()), spec.test_fraction * static_cast<double>(c.size()));

    std::set<std::string> train_events, test_events;
    for (const auto& l : s.train.labels()) {
      if (l.is_event()) train_events.insert(*l.event_id);
    }
    for (const auto& l : s.test.labels()) {
      if (l.is_event()) test_events.insert(*l.event_id);
    }
    for (const auto& e : test_events) EXPECT_FALSE(train_events.contains(e)) << e;
    EXPECT_EQ(std::set<std::string>(s.test_events.begin(), s.test_events.end()), test_events);
    EXPECT_TRUE(std::is_sorted(s.test.messages().begin(), s.test.messages().end(),
                               [](const Message& a, const Message& b) { return a.timestamp < b.timestamp; }));
    EXPECT_TRUE(std::is_sorted(s.train.messages().begin(), s.train.messages().end(),
                               [](const Message& a, const Message& b) { return a.timestamp < b.timestamp; }));
  }
}

TEST(Split, Errors) {
  EXPECT_THROW(make_split(event_corpus({5, 6}, 10), SplitSpec{}), Error);
  EXPECT_THROW(make_split(Corpus({{"a", "u", 1, ""}}), SplitSpec{}), Error);
  SplitSpec bad;
  bad.test_fraction = 1.0;
  EXPECT_THROW(bad.validate(), Error);
  bad.test_fraction = 0.3;
  bad.min_event_size = 50;
  bad.max_event_size = 10;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Replay, YieldsEveryMessageInOrder) {
  Corpus c({{"b", "u", 2, ""}, {"a", "u", 1, ""}, {"c", "u", 2, ""}});
  Replay r(c);
  std::vector<std::string> ids;
  while (const Message* m = r.next()) ids.push_back(m->id);
  EXPECT_EQ(ids, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(r.remaining(), 0u);
  EXPECT_EQ(r.next(), nullptr);

  Corpus empty;
  Replay e(empty);
  EXPECT_EQ(e.next(), nullptr);
}

TEST(Synthetic, CountsAndDeterminism) {
  SyntheticConfig cfg;
  cfg.events = 5;
  cfg.messages_per_event = 20;
  cfg.noise_messages = 100;
  const auto a = generate_synthetic(cfg);
  EXPECT_EQ(a.corpus.size(), 200u);
  EXPECT_EQ(a.corpus.event_sizes().size(), 5u);
  for (const auto& [id, n] : a.corpus.event_sizes()) EXPECT_EQ(n, 20u);

  TempDir dir;
  const auto b = generate_synthetic(cfg);
  write_corpus(a.corpus, dir / "a.jsonl", CorpusFormat::kJsonLines);
  write_corpus(b.corpus, dir / "b.jsonl", CorpusFormat::kJsonLines);
  a.embeddings.save(dir / "a.txt");
  b.embeddings.save(dir / "b.txt");
  EXPECT_EQ(testing::read_file(dir / "a.jsonl"), testing::read_file(dir / "b.jsonl"));
  EXPECT_EQ(testing::read_file(dir / "a.txt"), testing::read_file(dir / "b.txt"));
}

TEST(Synthetic, RejectsContradictoryConfig) {
  SyntheticConfig cfg;
  cfg.vocab_per_event = 0;
  EXPECT_THROW(generate_synthetic(cfg), Error);
  cfg = {};
  cfg.min_content_tokens = 12;
  cfg.max_content_tokens = 3;
  EXPECT_THROW(generate_synthetic(cfg), Error);
}

}  // namespace
}  // namespace newsdet
