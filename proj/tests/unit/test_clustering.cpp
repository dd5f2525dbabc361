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

#include <cmath>
#include <deque>

#include <gtest/gtest.h>

#include "newsdet/clustering.hpp"
#include "newsdet/error.hpp"
#include "test_support.hpp"

namespace newsdet {
namespace {

ClusteringConfig config(double t, std::size_t w, std::size_t b = 50, double eps = 1e-9) {
  ClusteringConfig c;
  c.threshold = t;
  c.window = w;
  c.batch_size = b;
  c.duplicate_epsilon = eps;
  return c;
}

ClusterInput input(std::string id, FeatureVector v, std::string author = "u", std::int64_t ts = 0) {
  ClusterInput in;
  in.message_id = std::move(id);
  in.vector = std::move(v);
  in.author_id = std::move(author);
  in.timestamp = ts;
  return in;
}

std::vector<Assignment> run_all(ThreadClusterer& c, const std::vector<FeatureVector>& stream) {
  std::vector<Assignment> out;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    auto done = c.push(input("m" + std::to_string(i), stream[i]));
    out.insert(out.end(), done.begin(), done.end());
  }
  auto rest = c.finish();
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

FeatureVector at_angle(double cos_theta) { return FeatureVector({cos_theta, std::sqrt(1 - cos_theta * cos_theta)}); }

TEST(ClusteringConfig, Validation) {
  EXPECT_NO_THROW(config(0.23, 2000).validate());
  EXPECT_NO_THROW(config(0.0, 10, 1, 0.0).validate());
  EXPECT_NO_THROW(config(2.0, 10).validate());
  EXPECT_THROW(config(2.5, 10).validate(), Error);
  EXPECT_THROW(config(0.2, 0).validate(), Error);
  EXPECT_THROW(config(0.2, 10, 0).validate(), Error);
  EXPECT_THROW(config(0.1, 10, 5, 0.2).validate(), Error);
  EXPECT_EQ(parse_clustering_algorithm("otc"), ClusteringAlgorithm::kOnline);
  EXPECT_EQ(parse_clustering_algorithm("mbtc"), ClusteringAlgorithm::kMiniBatch);
  EXPECT_THROW(parse_clustering_algorithm("kmeans"), Error);
}

TEST(Online, SpecExamples) {
  OnlineThreadClusterer c(2, config(0.20, 10));
  const auto first = c.step(input("a", FeatureVector({1, 0})));
  EXPECT_EQ(first.outcome, Outcome::kNewThread);
  EXPECT_EQ(first.thread_id, 0u);
  EXPECT_FALSE(first.distance.has_value());

  const auto dup = c.step(input("b", FeatureVector({2, 0})));
  EXPECT_EQ(dup.outcome, Outcome::kDuplicate);
  EXPECT_EQ(dup.thread_id, 0u);
  EXPECT_EQ(c.window().size(), 1u);

  const auto near = c.step(input("c", at_angle(0.9)));  // distance 0.10
  EXPECT_EQ(near.outcome, Outcome::kAssigned);
  EXPECT_EQ(near.thread_id, 0u);
  EXPECT_NEAR(*near.distance, 0.10, 1e-12);

  const auto far = c.step(input("d", FeatureVector({-1, 0.1})));
  EXPECT_EQ(far.outcome, Outcome::kNewThread);
  EXPECT_EQ(far.thread_id, 1u);
  EXPECT_EQ(c.thread_count(), 2u);
  EXPECT_THROW(c.step(input("e", FeatureVector({1, 0, 0}))), Error);
}

TEST(Online, ZeroVectorsOpenThreads) {
  OnlineThreadClusterer c(3, config(1.99, 10));
  c.step(input("a", FeatureVector({1, 1, 1})));
  const auto z1 = c.step(input("z1", FeatureVector::zeros(3)));
  const auto z2 = c.step(input("z2", FeatureVector::zeros(3)));
  EXPECT_EQ(z1.outcome, Outcome::kNewThread);
  EXPECT_EQ(z2.outcome, Outcome::kNewThread);
  EXPECT_EQ(*z2.distance, 2.0);
}

TEST(Online, TiesGoToEarliestEntry) {
  OnlineThreadClusterer d(2, config(0.5, 10));
  d.step(input("a", FeatureVector({1, 0})));
  d.step(input("b", FeatureVector({0, 1})));
  const auto mid = d.step(input("c", FeatureVector({1, 1})));  // equidistant from a and b
  EXPECT_EQ(mid.outcome, Outcome::kAssigned);
  EXPECT_EQ(mid.thread_id, 0u);
}

TEST(Threads, StatisticsAccumulate) {
  OnlineThreadClusterer c(2, config(0.5, 100));
  for (int i = 0; i < 10; ++i) {
    auto in = input("m" + std::to_string(i), at_angle(1.0 - 0.001 * (i + 1)), "u" + std::to_string(i % 8), 100 + i);
    in.confidence = i < 5 ? 1.0 : 0.5;
    in.terms = {"quake", i % 2 ? "city" : "alert"};
    c.push(std::move(in));
  }
  ASSERT_EQ(c.thread_count(), 1u);
  const auto& t = c.thread(0);
  EXPECT_EQ(t.size(), 10u);
  EXPECT_DOUBLE_EQ(t.unique_author_ratio(), 0.8);
  EXPECT_DOUBLE_EQ(t.mean_confidence(), 0.75);
  EXPECT_DOUBLE_EQ(t.mean_timestamp(), 104.5);
  EXPECT_EQ(t.total_terms, 20u);
  EXPECT_EQ(t.term_counts.at("quake"), 10u);
  EXPECT_EQ(t.created_at, 100);
  const auto snapshot = c.threads();
  EXPECT_EQ(snapshot.size(), 1u);
}

TEST(Threads, OutliveTheWindow) {
  OnlineThreadClusterer c(2, config(0.5, 2));
  for (int i = 0; i < 6; ++i) c.push(input("m" + std::to_string(i), at_angle(1.0 - 0.01 * (i + 1))));
  EXPECT_EQ(c.window().size(), 2u);
  EXPECT_EQ(c.thread(0).size(), 6u);
}

TEST(Window, NearestMatchesBruteForceEveryStep) {
  const auto stream = testing::clustered_stream(21, 1000, 12);
  const std::size_t w = 150;
  OnlineThreadClusterer c(12, config(0.25, w));
  struct Mirror {
    FeatureVector v;
    std::size_t thread;
  };
  std::deque<Mirror> mirror;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    ASSERT_EQ(c.window().size(), mirror.size());
    const auto got = c.window().nearest(stream[i]);
    if (mirror.empty()) {
      EXPECT_FALSE(got.has_value());
    } else {
      std::size_t best = 0;
      double best_d = cosine_distance(stream[i], mirror[0].v);
      for (std::size_t k = 1; k < mirror.size(); ++k) {
        const double d = cosine_distance(stream[i], mirror[k].v);
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      ASSERT_TRUE(got.has_value());
      EXPECT_NEAR(got->distance, best_d, 1e-12) << "step " << i;
      if (got->position != best) {
        // only a numerical tie may pick a different entry
        EXPECT_NEAR(cosine_distance(stream[i], mirror[got->position].v), best_d, 1e-12) << "step " << i;
      }
      EXPECT_EQ(got->thread_id, mirror[got->position].thread);
    }
    const auto a = c.step(input("m" + std::to_string(i), stream[i]));
    if (a.outcome != Outcome::kDuplicate) {
      if (mirror.size() == w) mirror.pop_front();
      mirror.push_back({stream[i], a.thread_id});
    }
  }
}

TEST(Window, CapacityNeverExceeded) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> wdist(1, 40), bdist(1, 17);
    const std::size_t w = wdist(rng), b = bdist(rng);
    const auto stream = testing::clustered_stream(seed, 300, 4, 3, 0.05);
    for (auto algo : {ClusteringAlgorithm::kOnline, ClusteringAlgorithm::kMiniBatch}) {
      auto c = make_clusterer(algo, 4, config(0.3, w, b));
      for (std::size_t i = 0; i < stream.size(); ++i) {
        c->push(input("m" + std::to_string(i), stream[i]));
        ASSERT_LE(c->window().size(), w);
      }
      c->finish();
      ASSERT_LE(c->window().size(), w);
    }
  }
}

TEST(Window, DuplicatesLeaveWindowUnchanged) {
  const auto stream = testing::clustered_stream(5, 200, 6);
  for (auto algo : {ClusteringAlgorithm::kOnline, ClusteringAlgorithm::kMiniBatch}) {
    auto c = make_clusterer(algo, 6, config(0.2, 64, 1));
    run_all(*c, stream);
    const auto& win = c->window();
    std::vector<std::string> before;
    for (std::size_t p = 0; p < win.size(); ++p) before.push_back(win.entry(p).message_id);
    const auto threads_before = c->thread_count();
    // re-present every buffered vector
    std::vector<FeatureVector> buffered;
    for (std::size_t p = 0; p < win.size(); ++p) {
      const auto& v = stream[std::stoul(win.entry(p).message_id.substr(1))];
      if (!v.is_zero()) buffered.push_back(v);  // a zero vector is never a duplicate
    }
    for (std::size_t k = 0; k < buffered.size(); ++k) {
      const auto done = c->push(input("again" + std::to_string(k), buffered[k]));
      ASSERT_EQ(done.size(), 1u);
      EXPECT_EQ(done[0].outcome, Outcome::kDuplicate);
    }
    std::vector<std::string> after;
    for (std::size_t p = 0; p < win.size(); ++p) after.push_back(win.entry(p).message_id);
    EXPECT_EQ(before, after);
    EXPECT_EQ(c->thread_count(), threads_before);
  }
}

TEST(MiniBatch, SizeOneEqualsOnline) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto stream = testing::clustered_stream(seed, 2000, 8);
    OnlineThreadClusterer online(8, config(0.2, 300));
    MiniBatchThreadClusterer batched(8, config(0.2, 300, 1));
    EXPECT_EQ(run_all(online, stream), run_all(batched, stream)) << "seed " << seed;
  }
}

TEST(MiniBatch, SpecExamples) {
  MiniBatchThreadClusterer c(2, config(0.2, 10, 3));
  EXPECT_TRUE(c.push(input("a", FeatureVector({1, 0}))).empty());
  EXPECT_TRUE(c.push(input("b", FeatureVector({0, 1}))).empty());
  EXPECT_EQ(c.pending(), 2u);
  const auto done = c.push(input("c", FeatureVector({-1, -1})));
  ASSERT_EQ(done.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(done[i].outcome, Outcome::kNewThread);
    EXPECT_EQ(done[i].thread_id, i);
  }
  EXPECT_EQ(c.pending(), 0u);

  MiniBatchThreadClusterer d(2, config(0.2, 10, 2));
  d.push(input("x", FeatureVector({1, 2})));
  const auto pair = d.push(input("x2", FeatureVector({1, 2})));
  ASSERT_EQ(pair.size(), 2u);
  EXPECT_EQ(pair[0].outcome, Outcome::kNewThread);
  EXPECT_EQ(pair[1].outcome, Outcome::kDuplicate);
  EXPECT_EQ(pair[1].thread_id, pair[0].thread_id);
  EXPECT_EQ(d.window().size(), 1u);
}

TEST(MiniBatch, SecondPassSeesEarlierAssignments) {
  // a opens a thread, b joins via a, c is only close to b.
  MiniBatchThreadClusterer c(2, config(0.05, 10, 3));
  c.push(input("a", at_angle(1.0)));
  c.push(input("b", at_angle(0.97)));
  const auto done = c.push(input("c", at_angle(0.885)));
  ASSERT_EQ(done.size(), 3u);
  EXPECT_GE(cosine_distance(at_angle(1.0), at_angle(0.885)), 0.05);
  EXPECT_EQ(done[0].outcome, Outcome::kNewThread);
  EXPECT_EQ(done[1].outcome, Outcome::kAssigned);
  EXPECT_EQ(done[2].outcome, Outcome::kAssigned);
  EXPECT_EQ(done[2].thread_id, done[0].thread_id);
}

TEST(MiniBatch, PartialBatchFlushedAtFinish) {
  MiniBatchThreadClusterer c(2, config(0.2, 10, 50));
  for (int i = 0; i < 7; ++i) EXPECT_TRUE(c.push(input("m" + std::to_string(i), at_angle(1 - 0.3 * (i % 2)))).empty());
  const auto done = c.finish();
  EXPECT_EQ(done.size(), 7u);
  EXPECT_TRUE(c.finish().empty());
}

TEST(MiniBatch, EvictsOnlyWhenNeeded) {
  MiniBatchThreadClusterer c(2, config(0.01, 4, 2));
  c.push(input("a", FeatureVector({1, 0})));
  c.push(input("b", FeatureVector({0, 1})));
  c.push(input("c", FeatureVector({-1, 0})));
  c.push(input("d", FeatureVector({0, -1})));
  EXPECT_EQ(c.window().size(), 4u);
  c.push(input("e", FeatureVector({1, 1})));
  c.push(input("f", FeatureVector({-1, 1})));
  ASSERT_EQ(c.window().size(), 4u);
  EXPECT_EQ(c.window().entry(0).message_id, "c");
  EXPECT_EQ(c.window().entry(3).message_id, "f");
}

TEST(Threshold, ExtremesOnNonAntipodalStreams) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<FeatureVector> stream;
  for (int i = 0; i < 300; ++i) stream.push_back(FeatureVector({u(rng), u(rng), u(rng)}));  // positive orthant
  for (auto algo : {ClusteringAlgorithm::kOnline, ClusteringAlgorithm::kMiniBatch}) {
    auto zero = make_clusterer(algo, 3, config(0.0, 100, 7, 0.0));
    for (const auto& a : run_all(*zero, stream)) EXPECT_EQ(a.outcome, Outcome::kNewThread);
    auto two = make_clusterer(algo, 3, config(2.0, 100, 7, 0.0));
    const auto all = run_all(*two, stream);
    EXPECT_EQ(all.front().outcome, Outcome::kNewThread);
    for (std::size_t i = 1; i < all.size(); ++i) EXPECT_NE(all[i].outcome, Outcome::kNewThread) << i;
  }
}

TEST(Determinism, SameStreamSameAssignments) {
  const auto stream = testing::clustered_stream(99, 500, 10);
  for (auto algo : {ClusteringAlgorithm::kOnline, ClusteringAlgorithm::kMiniBatch}) {
    auto a = make_clusterer(algo, 10, config(0.23, 100, 13));
    auto b = make_clusterer(algo, 10, config(0.23, 100, 13));
    EXPECT_EQ(run_all(*a, stream), run_all(*b, stream));
  }
}

TEST(Benchmark, SeriesShape) {
  const auto stream = testing::clustered_stream(1, 400, 8);
  for (auto algo : {ClusteringAlgorithm::kOnline, ClusteringAlgorithm::kMiniBatch}) {
    const auto s = benchmark_clustering(stream, config(0.2, 100, 25), algo);
    ASSERT_EQ(s.seconds.size(), stream.size());
    ASSERT_EQ(s.window_sizes.size(), stream.size());
    EXPECT_LT(s.plateau_start, stream.size());
    EXPECT_GT(s.plateau_mean, 0.0);
    for (double x : s.seconds) EXPECT_GE(x, 0.0);
  }
}

}  // namespace
}  // namespace newsdet
