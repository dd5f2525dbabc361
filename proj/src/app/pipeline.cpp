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

#include "newsdet/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <set>
#include <thread>
#include <unordered_map>

#include "newsdet/error.hpp"
#include "newsdet/random.hpp"

namespace newsdet {

PreprocessProfile classification_profile(const PipelineConfig& config) {
  auto profile = PreprocessProfile::classification();
  profile.mention_token = config.mention_token;
  profile.url_token = config.url_token;
  profile.number_token = config.number_token;
  profile.validate();
  return profile;
}

IdfTable fit_idf(const Corpus& corpus, const PipelineConfig& config) {
  const auto profile = classification_profile(config);
  std::vector<Tokens> documents;
  documents.reserve(corpus.size());
  for (const auto& m : corpus.messages()) documents.push_back(preprocess(m.text, profile));
  return compute_idf(documents);
}

Featurizer Featurizer::build(std::shared_ptr<const EmbeddingTable> table, std::shared_ptr<const StopwordSet> stopwords,
                             const PipelineConfig& config, std::shared_ptr<const IdfTable> idf) {
  if (config.weighting == Weighting::kIdf && !idf) {
    fail(ErrorCode::kPrecondition, "IDF weighting needs an IDF table");
  }
  auto clustering = PreprocessProfile::clustering(std::move(stopwords));
  clustering.mention_token = config.mention_token;
  clustering.url_token = config.url_token;
  clustering.number_token = config.number_token;
  clustering.validate();
  return Featurizer{Vectorizer(table, classification_profile(config), config.weighting, std::move(idf)),
                    Vectorizer(table, std::move(clustering), Weighting::kAverage)};
}

std::vector<LabeledExample> labeled_examples(const Corpus& corpus, const Vectorizer& vectorizer) {
  if (!corpus.labeled()) fail(ErrorCode::kPrecondition, "training needs a labeled corpus");
  std::vector<LabeledExample> out;
  out.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    out.push_back({vectorizer.vectorize(corpus.message(i).text), corpus.label(i).message_class()});
  }
  return out;
}

StreamResult run_stream(const Corpus& stream, const ClassifierModel* model, const Featurizer& features,
                        ClusteringAlgorithm algorithm, const ClusteringConfig& clustering, double keep_threshold) {
  auto clusterer = make_clusterer(algorithm, features.clustering.table().dimension(), clustering);
  StreamResult result;
  result.confidence.assign(stream.size(), 1.0);
  Replay replay(stream);
  while (const Message* m = replay.next()) {
    double confidence = 1.0;
    if (model) confidence = model->predict(features.classification.vectorize(m->text)).confidence;
    result.confidence[replay.index()] = confidence;
    if (confidence < keep_threshold) continue;
    ++result.kept;
    ClusterInput input;
    input.message_id = m->id;
    input.terms = features.clustering.tokens(m->text);
    input.vector = features.clustering.vectorize(input.terms);
    input.author_id = m->author_id;
    input.timestamp = m->timestamp;
    input.confidence = confidence;
    auto done = clusterer->push(std::move(input));
    result.assignments.insert(result.assignments.end(), done.begin(), done.end());
  }
  auto rest = clusterer->finish();
  result.assignments.insert(result.assignments.end(), rest.begin(), rest.end());
  result.threads = clusterer->threads();
  return result;
}

namespace {

SplitOutcome run_split(const Corpus& corpus, const std::shared_ptr<const EmbeddingTable>& table,
                       const std::shared_ptr<const StopwordSet>& stopwords, const PipelineConfig& config,
                       std::size_t index) {
  SplitSpec spec = config.split;
  spec.seed = derive_seed(config.seed, "split", index);
  const auto split = make_split(corpus, spec);

  std::shared_ptr<const IdfTable> idf;
  if (config.weighting == Weighting::kIdf) idf = std::make_shared<IdfTable>(fit_idf(split.train, config));
  const auto features = Featurizer::build(table, stopwords, config, idf);

  const auto examples = labeled_examples(split.train, features.classification);
  NetworkArchitecture arch = config.architecture;
  arch.input_dim = table->dimension();
  TrainingConfig training = config.training;
  training.seed = derive_seed(config.seed, "train", index);
  const auto report = train(examples, arch, training);

  const auto stream =
      run_stream(split.test, &report.model, features, config.algorithm, config.clustering, config.keep_threshold);

  std::unordered_map<std::string, std::string> truth;
  const std::set<std::string> eligible(split.test_events.begin(), split.test_events.end());
  for (std::size_t i = 0; i < split.test.size(); ++i) {
    const auto& label = split.test.label(i);
    if (label.is_event() && eligible.contains(*label.event_id)) truth.emplace(split.test.message(i).id, *label.event_id);
  }

  std::vector<std::vector<std::string>> candidates;
  for (const auto& thread : stream.threads) {
    if (thread.size() < config.detection.min_candidate_size) continue;
    auto& ids = candidates.emplace_back();
    for (const auto& m : thread.members) ids.push_back(m.message_id);
  }

  SplitOutcome out;
  out.split = index;
  out.detection = match_detections(candidates, truth, split.test_events.size(), config.detection);
  std::vector<std::string> clusters, classes;
  for (const auto& a : stream.assignments) {
    auto it = truth.find(a.message_id);
    if (it == truth.end()) continue;
    clusters.push_back(std::to_string(a.thread_id));
    classes.push_back(it->second);
  }
  if (clusters.empty()) {
    out.clusters = ClusterMetrics{0.0, 0.0, 0.0};
  } else {
    out.clusters = cluster_metrics(clusters, classes);
  }
  out.validation_accuracy = report.model.metadata().validation_accuracy;
  out.train_size = split.train.size();
  out.test_size = split.test.size();
  return out;
}

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  void add(double x) {
    sum += x;
    sum_sq += x * x;
  }
  double mean(double n) const { return sum / n; }
  double stddev(double n) const {
    const double m = mean(n);
    return std::sqrt(std::max(0.0, sum_sq / n - m * m));
  }
};

}  // namespace

ProtocolResult run_protocol(const Corpus& corpus, std::shared_ptr<const EmbeddingTable> table,
                            std::shared_ptr<const StopwordSet> stopwords, const PipelineConfig& config,
                            std::size_t n_splits) {
  if (n_splits == 0) fail(ErrorCode::kInvalidArgument, "n_splits must be positive");
  if (!corpus.labeled()) fail(ErrorCode::kPrecondition, "evaluation needs a labeled corpus");

  ProtocolResult result;
  result.splits.resize(n_splits);
  std::vector<std::exception_ptr> errors(n_splits);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n_splits; i = next++) {
      try {
        result.splits[i] = run_split(corpus, table, stopwords, config, i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::min(config.jobs, n_splits);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const double n = static_cast<double>(n_splits);
  Moments p, r, f, h, c, v, matched, total, detected, events;
  for (const auto& s : result.splits) {
    p.add(s.detection.precision);
    r.add(s.detection.recall);
    f.add(s.detection.f1);
    h.add(s.clusters.homogeneity);
    c.add(s.clusters.completeness);
    v.add(s.clusters.v_measure);
    matched.add(static_cast<double>(s.detection.matched_candidates));
    total.add(static_cast<double>(s.detection.total_candidates));
    detected.add(static_cast<double>(s.detection.detected_events));
    events.add(static_cast<double>(s.detection.total_events));
  }
  auto count = [n](const Moments& m) { return static_cast<std::size_t>(std::llround(m.mean(n))); };
  result.mean_detection = {p.mean(n), r.mean(n), f.mean(n), count(matched), count(total), count(detected), count(events),
                           false};
  result.std_detection = {p.stddev(n), r.stddev(n), f.stddev(n), 0, 0, 0, 0, false};
  result.mean_clusters = {h.mean(n), c.mean(n), v.mean(n)};
  result.std_clusters = {h.stddev(n), c.stddev(n), v.stddev(n)};
  return result;
}

std::vector<SweepRow> threshold_sweep(const Corpus& corpus, std::shared_ptr<const EmbeddingTable> table,
                                      std::shared_ptr<const StopwordSet> stopwords, const PipelineConfig& config,
                                      const SweepSpec& spec) {
  if (!corpus.labeled()) fail(ErrorCode::kPrecondition, "the threshold sweep needs a labeled corpus");
  PipelineConfig plain = config;
  plain.weighting = Weighting::kAverage;
  const auto features = Featurizer::build(table, stopwords, plain);

  std::vector<std::size_t> news;
  std::vector<std::string> truth;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!corpus.label(i).is_event()) continue;
    news.push_back(i);
    truth.push_back(*corpus.label(i).event_id);
  }
  if (news.empty()) fail(ErrorCode::kPrecondition, "the corpus has no event-labeled messages");

  std::map<PreprocessMode, std::vector<FeatureVector>> vectors;
  for (auto mode : spec.profiles) {
    const auto& vectorizer = mode == PreprocessMode::kClassification ? features.classification : features.clustering;
    auto& out = vectors[mode];
    if (!out.empty()) continue;
    for (auto i : news) out.push_back(vectorizer.vectorize(corpus.message(i).text));
  }

  std::vector<SweepRow> rows;
  for (auto algorithm : spec.algorithms) {
    std::vector<std::size_t> batches{0};
    if (algorithm == ClusteringAlgorithm::kMiniBatch) batches = spec.batch_sizes;
    for (auto b : batches) {
      for (auto mode : spec.profiles) {
        for (auto t : spec.thresholds) {
          ClusteringConfig cc = config.clustering;
          cc.threshold = t;
          if (b > 0) cc.batch_size = b;
          auto clusterer = make_clusterer(algorithm, table->dimension(), cc);
          std::vector<std::string> clusters(news.size());
          std::unordered_map<std::string, std::size_t> position;
          for (std::size_t k = 0; k < news.size(); ++k) position.emplace(corpus.message(news[k]).id, k);
          auto record = [&](const std::vector<Assignment>& done) {
            for (const auto& a : done) clusters[position.at(a.message_id)] = std::to_string(a.thread_id);
          };
          for (std::size_t k = 0; k < news.size(); ++k) {
            ClusterInput input;
            input.message_id = corpus.message(news[k]).id;
            input.vector = vectors[mode][k];
            record(clusterer->push(std::move(input)));
          }
          record(clusterer->finish());
          rows.push_back({algorithm, b, mode, t, cluster_metrics(clusters, truth)});
        }
      }
    }
  }
  return rows;
}

}  // namespace newsdet
