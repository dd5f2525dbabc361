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
#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "newsdet/error.hpp"
#include "newsdet/ranking.hpp"

namespace newsdet {
namespace {

Thread make_thread(std::size_t id, std::size_t size, std::size_t authors, double confidence, std::int64_t ts,
                   std::size_t distinct_terms = 200) {
  Thread t;
  t.id = id;
  t.created_at = ts;
  for (std::size_t i = 0; i < size; ++i) {
    t.members.push_back({"t" + std::to_string(id) + "m" + std::to_string(i), "a" + std::to_string(i % authors), ts,
                         confidence, false});
  }
  for (std::size_t k = 0; k < distinct_terms; ++k) t.term_counts["w" + std::to_string(k)] = 1;
  t.total_terms = distinct_terms;
  return t;
}

RankingConfig open_config() {
  RankingConfig c;
  c.min_entropy = 0.0;
  c.top_k_size = 1000;
  c.top_k_growth = 1000;
  c.final_k = 1000;
  return c;
}

constexpr std::int64_t kNow = 1'000'000;

TEST(Entropy, SpotValues) {
  const std::vector<std::size_t> single{7};
  EXPECT_EQ(entropy_of_counts(single), 0.0);
  for (std::size_t k : {2u, 5u, 40u}) {
    const std::vector<std::size_t> uniform(k, 1);
    EXPECT_NEAR(entropy_of_counts(uniform), std::log(static_cast<double>(k)), 1e-12);
  }
  const std::vector<std::size_t> skew{3, 1};
  EXPECT_NEAR(entropy_of_counts(skew), -(0.75 * std::log(0.75) + 0.25 * std::log(0.25)), 1e-15);
  EXPECT_NEAR(entropy_of_counts(skew), 0.5623, 1e-4);
  const std::vector<std::size_t> none{};
  EXPECT_THROW(entropy_of_counts(none), Error);
}

TEST(Entropy, ThreadTerms) {
  Thread t;
  t.term_counts = {{"quake", 3}, {"city", 1}};
  t.total_terms = 4;
  EXPECT_NEAR(event_entropy(t), 0.5623, 1e-4);
  EXPECT_THROW(event_entropy(Thread{}), Error);
}

TEST(Entropy, InvariantUnderRelabeling) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<std::size_t> d(1, 9);
    Thread a, b;
    std::vector<std::string> names;
    for (int k = 0; k < 12; ++k) names.push_back("term" + std::to_string(k));
    std::vector<std::string> renamed = names;
    std::shuffle(renamed.begin(), renamed.end(), rng);
    for (std::size_t k = 0; k < names.size(); ++k) {
      const auto n = d(rng);
      a.term_counts[names[k]] = n;
      b.term_counts["x" + renamed[k]] = n;
    }
    EXPECT_NEAR(event_entropy(a), event_entropy(b), 1e-12);
  }
}

TEST(Growth, Examples) {
  Thread t;
  for (int i = 0; i < 10; ++i) t.members.push_back({"r", "a", kNow - 100 * i, 1.0, false});
  for (int i = 0; i < 2; ++i) t.members.push_back({"p", "a", kNow - 3600 - 10 - i, 1.0, false});
  EXPECT_EQ(growth_rate(t, kNow, 3600), 8.0);

  Thread uniform;
  for (int i = 0; i < 20; ++i) uniform.members.push_back({"u", "a", kNow - 180 - 360 * i, 1.0, false});
  EXPECT_EQ(growth_rate(uniform, kNow, 3600), 0.0);

  Thread old;
  old.members.push_back({"o", "a", kNow - 5 * 3600, 1.0, false});
  EXPECT_EQ(growth_rate(old, kNow, 3600), 0.0);
}

TEST(Select, SizeMustExceedMinimum) {
  const std::vector<Thread> threads{make_thread(0, 5, 5, 1.0, kNow), make_thread(1, 6, 6, 1.0, kNow)};
  const auto out = select_candidates(threads, open_config(), kNow);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].thread_id, 1u);
}

TEST(Select, UniqueAuthorRatio) {
  const std::vector<Thread> threads{make_thread(0, 10, 8, 1.0, kNow), make_thread(1, 10, 9, 1.0, kNow)};
  const auto out = select_candidates(threads, open_config(), kNow);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].thread_id, 1u);
  EXPECT_DOUBLE_EQ(out[0].unique_author_ratio, 0.9);
}

TEST(Select, LowEntropyDropped) {
  auto spam = make_thread(0, 20, 20, 1.0, kNow, 0);
  spam.term_counts = {{"happy", 20}, {"birthday", 20}, {"star", 20}, {"love", 3}, {"you", 3}};
  spam.total_terms = 66;
  const std::vector<Thread> threads{spam, make_thread(1, 10, 10, 1.0, kNow)};
  RankingConfig config = open_config();
  config.min_entropy = 5.0;
  EXPECT_LT(event_entropy(spam), 5.0);
  const auto out = select_candidates(threads, config, kNow);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].thread_id, 1u);
}

TEST(Select, ConfidenceAndRecency) {
  const std::vector<Thread> threads{make_thread(0, 10, 10, 0.80, kNow), make_thread(1, 10, 10, 0.90, kNow - 25 * 3600),
                                    make_thread(2, 10, 10, 0.90, kNow - 23 * 3600)};
  const auto out = select_candidates(threads, open_config(), kNow);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].thread_id, 2u);
}

TEST(Select, SizeAndGrowthSelection) {
  // Large old-ish threads vs a small thread that is growing.
  std::vector<Thread> threads;
  for (std::size_t i = 0; i < 3; ++i) threads.push_back(make_thread(i, 20 + i, 20 + i, 1.0, kNow - 5 * 3600));
  auto growing = make_thread(3, 7, 7, 1.0, kNow);
  threads.push_back(growing);
  RankingConfig config = open_config();
  config.top_k_size = 2;
  config.top_k_growth = 5;
  const auto out = select_candidates(threads, config, kNow);
  std::set<std::size_t> ids;
  for (const auto& c : out) {
    ids.insert(c.thread_id);
    if (c.thread_id == 3) EXPECT_EQ(c.reason, SelectionReason::kByGrowth);
    else EXPECT_EQ(c.reason, SelectionReason::kBySize);
  }
  EXPECT_EQ(ids, (std::set<std::size_t>{1, 2, 3}));
  EXPECT_EQ(to_string(SelectionReason::kByGrowth), "growth");
}

TEST(Select, OrderingTiesBySizeThenId) {
  const std::vector<Thread> threads{make_thread(4, 8, 8, 1.0, kNow), make_thread(2, 9, 9, 1.0, kNow),
                                    make_thread(1, 8, 8, 1.0, kNow)};
  const auto out = select_candidates(threads, open_config(), kNow);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].thread_id, 2u);
  EXPECT_EQ(out[1].thread_id, 1u);
  EXPECT_EQ(out[2].thread_id, 4u);
}

TEST(Select, ConfigValidation) {
  RankingConfig c;
  c.min_mean_confidence = 1.5;
  EXPECT_THROW(c.validate(), Error);
  c = RankingConfig{};
  c.final_k = 0;
  EXPECT_THROW(c.validate(), Error);
  EXPECT_NO_THROW(RankingConfig{}.validate());
}

TEST(TopTerms, CountThenLexicographic) {
  Thread t;
  t.term_counts = {{"b", 2}, {"a", 2}, {"c", 5}, {"d", 1}};
  const auto top = top_terms(t, 3);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0].first, "c");
  EXPECT_EQ(top[1].first, "a");
  EXPECT_EQ(top[2].first, "b");
}

std::vector<Thread> random_population(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> size(1, 30), terms(1, 300);
  std::uniform_real_distribution<double> conf(0.6, 1.0), author_share(0.5, 1.0);
  std::uniform_int_distribution<std::int64_t> age(0, 48 * 3600);
  std::vector<Thread> out;
  for (std::size_t i = 0; i < n; ++i) {
    Thread t;
    t.id = i;
    const auto s = size(rng);
    const auto authors = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(author_share(rng) * s)));
    const double c = conf(rng);
    for (std::size_t m = 0; m < s; ++m) {
      t.members.push_back({"m", "a" + std::to_string(m % authors), kNow - age(rng), c, false});
    }
    const auto k = terms(rng);
    std::uniform_int_distribution<std::size_t> count(1, 4);
    for (std::size_t w = 0; w < k; ++w) {
      const auto n_w = count(rng);
      t.term_counts["w" + std::to_string(w)] = n_w;
      t.total_terms += n_w;
    }
    out.push_back(std::move(t));
  }
  return out;
}

bool passes(const CandidateEvent& c, const RankingConfig& config) {
  return c.size > config.min_size && c.mean_confidence >= config.min_mean_confidence &&
         c.mean_timestamp >= static_cast<double>(kNow - config.recency_window) &&
         c.unique_author_ratio >= config.min_unique_author_ratio && c.entropy >= config.min_entropy;
}

TEST(SelectProperties, BoundedFilteredAndOrdered) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    std::mt19937_64 rng(seed);
    const auto threads = random_population(rng, 120);
    RankingConfig config;
    config.min_entropy = 3.0;
    config.top_k_size = 15;
    config.top_k_growth = 15;
    config.final_k = 10;
    const auto out = select_candidates(threads, config, kNow);
    EXPECT_LE(out.size(), config.final_k);
    for (std::size_t i = 0; i < out.size(); ++i) {
      EXPECT_TRUE(passes(out[i], config)) << "seed " << seed;
      if (i > 0) EXPECT_GE(out[i - 1].entropy, out[i].entropy);
    }
  }
}

std::set<std::size_t> ids_of(const std::vector<CandidateEvent>& v) {
  std::set<std::size_t> out;
  for (const auto& c : v) out.insert(c.thread_id);
  return out;
}

TEST(SelectProperties, RaisingAThresholdNeverAddsCandidates) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    std::mt19937_64 rng(100 + seed);
    const auto threads = random_population(rng, 80);
    RankingConfig base = open_config();
    base.min_mean_confidence = 0.7;
    base.min_unique_author_ratio = 0.7;
    base.min_entropy = 2.0;
    const auto before = ids_of(select_candidates(threads, base, kNow));
    std::vector<RankingConfig> raised(5, base);
    raised[0].min_size += 5;
    raised[1].min_mean_confidence = 0.85;
    raised[2].min_unique_author_ratio = 0.9;
    raised[3].min_entropy = 4.0;
    raised[4].recency_window = 12 * 3600;
    for (const auto& r : raised) {
      const auto after = ids_of(select_candidates(threads, r, kNow));
      EXPECT_TRUE(std::includes(before.begin(), before.end(), after.begin(), after.end())) << "seed " << seed;
    }
  }
}

}  // namespace
}  // namespace newsdet
