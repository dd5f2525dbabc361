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
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

#include "newsdet/error.hpp"
#include "newsdet/pipeline.hpp"
#include "newsdet/ranking.hpp"
#include "newsdet/synthetic.hpp"

namespace newsdet {

namespace {

namespace fs = std::filesystem;

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::ofstream open_report(const fs::path& dir, const char* name) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create output directory " + dir.string() + ": " + ec.message());
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + (dir / name).string());
  return out;
}

const fs::path& require(const fs::path& path, const char* key) {
  if (path.empty()) fail(ErrorCode::kInvalidArgument, std::string(key) + " is not set");
  return path;
}

Corpus load_input(const fs::path& path, const PipelineConfig& config) {
  auto loaded = load_corpus(path, config.corpus_format);
  return apply_label_policy(loaded.corpus, config.sport_events);
}

std::shared_ptr<const EmbeddingTable> load_table(const PipelineConfig& config) {
  auto loaded = load_embeddings(require(config.embeddings_path, "paths.embeddings"));
  return std::make_shared<const EmbeddingTable>(std::move(loaded.table));
}

std::shared_ptr<const StopwordSet> load_stop(const PipelineConfig& config) {
  return config.stopwords_path.empty() ? default_stopwords() : load_stopwords(config.stopwords_path);
}

}  // namespace

void save_idf(const IdfTable& idf, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << std::setprecision(17);
  out << "#documents\t" << idf.document_count << "\n";
  out << "#default\t" << idf.default_weight << "\n";
  std::map<std::string, double> sorted(idf.weights.begin(), idf.weights.end());
  for (const auto& [token, w] : sorted) out << token << "\t" << w << "\n";
}

IdfTable load_idf(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open IDF table " + path.string());
  IdfTable idf;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      fail(ErrorCode::kParse, path.string() + ":" + std::to_string(line_no) + ": expected token<TAB>weight");
    }
    const std::string key = line.substr(0, tab);
    double value = 0.0;
    try {
      value = std::stod(line.substr(tab + 1));
    } catch (const std::exception&) {
      fail(ErrorCode::kParse, path.string() + ":" + std::to_string(line_no) + ": bad weight");
    }
    if (key == "#documents") {
      idf.document_count = static_cast<std::size_t>(value);
    } else if (key == "#default") {
      idf.default_weight = value;
    } else {
      idf.weights[key] = value;
    }
  }
  return idf;
}

TrainSummary cmd_train(const PipelineConfig& config, const fs::path& out_dir) {
  const auto corpus = load_input(require(config.corpus_path, "paths.corpus"), config);
  const auto table = load_table(config);
  std::shared_ptr<const IdfTable> idf;
  if (config.weighting == Weighting::kIdf) idf = std::make_shared<IdfTable>(fit_idf(corpus, config));
  const auto features = Featurizer::build(table, load_stop(config), config, idf);
  const auto examples = labeled_examples(corpus, features.classification);

  NetworkArchitecture arch = config.architecture;
  arch.input_dim = table->dimension();
  const auto report = train(examples, arch, config.training);

  auto out = open_report(out_dir, kTrainReportFile);
  out << "epoch\ttrain_loss\tvalidation_accuracy\n";
  for (std::size_t e = 0; e < report.train_loss.size(); ++e) {
    out << e + 1 << "\t" << num(report.train_loss[e]) << "\t" << num(report.validation_accuracy[e]) << "\n";
  }
  TrainSummary summary;
  summary.model_path = out_dir / kModelFile;
  save_model(report.model, summary.model_path);
  if (idf) save_idf(*idf, out_dir / kIdfFile);
  summary.validation_accuracy = report.model.metadata().validation_accuracy;
  summary.epochs = report.model.metadata().epochs_run;
  return summary;
}

std::size_t cmd_detect(const PipelineConfig& config, const fs::path& input, const fs::path& out_dir) {
  const auto model = load_model(require(config.model_path, "paths.model"));
  const auto table = load_table(config);
  if (model.architecture().input_dim != table->dimension()) {
    fail(ErrorCode::kDimensionMismatch, "model expects " + std::to_string(model.architecture().input_dim) +
                                            "-dimensional features, embeddings have " +
                                            std::to_string(table->dimension()));
  }
  std::shared_ptr<const IdfTable> idf;
  if (config.weighting == Weighting::kIdf) {
    idf = std::make_shared<IdfTable>(load_idf(require(config.idf_path, "paths.idf")));
  }
  const auto features = Featurizer::build(table, load_stop(config), config, idf);
  const auto stream = load_input(input.empty() ? require(config.corpus_path, "paths.corpus") : input, config);

  ClusteringConfig clustering = config.clustering;
  clustering.window = config.detect_window;
  const auto result = run_stream(stream, &model, features, config.algorithm, clustering, config.keep_threshold);
  const std::int64_t now = stream.messages().back().timestamp;
  const auto candidates = select_candidates(result.threads, config.ranking, now);

  auto assignments = open_report(out_dir, kAssignmentsFile);
  assignments << "message_id\toutcome\tthread_id\tdistance\n";
  for (const auto& a : result.assignments) {
    assignments << a.message_id << "\t" << to_string(a.outcome) << "\t" << a.thread_id << "\t"
                << (a.distance ? num(*a.distance) : std::string("-")) << "\n";
  }
  auto report = open_report(out_dir, kCandidatesFile);
  report << "rank\tthread_id\tsize\tentropy\tgrowth\tmean_confidence\tunique_authors\treason\ttop_terms\n";
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    std::string terms;
    for (const auto& [term, count] : top_terms(result.threads[c.thread_id], 10)) {
      if (!terms.empty()) terms += ",";
      terms += term + ":" + std::to_string(count);
    }
    report << i + 1 << "\t" << c.thread_id << "\t" << c.size << "\t" << num(c.entropy) << "\t" << num(c.growth_rate)
           << "\t" << num(c.mean_confidence) << "\t" << num(c.unique_author_ratio) << "\t" << to_string(c.reason)
           << "\t" << terms << "\n";
  }
  return candidates.size();
}

ProtocolResult cmd_evaluate(const PipelineConfig& config, const fs::path& out_dir) {
  const auto corpus = load_input(require(config.corpus_path, "paths.corpus"), config);
  const auto result = run_protocol(corpus, load_table(config), load_stop(config), config, config.n_splits);

  auto tsv = open_report(out_dir, kMetricsFile);
  tsv << "split\tprecision\trecall\tf1\thomogeneity\tcompleteness\tv_measure\tmatched\tcandidates\tdetected\tevents\n";
  auto row = [&](const std::string& name, const DetectionMetrics& d, const ClusterMetrics& c, bool counts) {
    tsv << name << "\t" << num(d.precision) << "\t" << num(d.recall) << "\t" << num(d.f1) << "\t"
        << num(c.homogeneity) << "\t" << num(c.completeness) << "\t" << num(c.v_measure);
    if (counts) {
      tsv << "\t" << d.matched_candidates << "\t" << d.total_candidates << "\t" << d.detected_events << "\t"
          << d.total_events << "\n";
    } else {
      tsv << "\t-\t-\t-\t-\n";
    }
  };
  for (const auto& s : result.splits) row(std::to_string(s.split), s.detection, s.clusters, true);
  row("mean", result.mean_detection, result.mean_clusters, true);
  row("std", result.std_detection, result.std_clusters, false);

  auto jsonl = open_report(out_dir, kMetricsJsonFile);
  auto record = [](const std::string& split, const DetectionMetrics& d, const ClusterMetrics& c) {
    nlohmann::ordered_json j;
    j["split"] = split;
    j["precision"] = d.precision;
    j["recall"] = d.recall;
    j["f1"] = d.f1;
    j["homogeneity"] = c.homogeneity;
    j["completeness"] = c.completeness;
    j["v_measure"] = c.v_measure;
    j["matched_candidates"] = d.matched_candidates;
    j["total_candidates"] = d.total_candidates;
    j["detected_events"] = d.detected_events;
    j["total_events"] = d.total_events;
    j["precision_undefined"] = d.precision_undefined;
    return j.dump();
  };
  for (const auto& s : result.splits) jsonl << record(std::to_string(s.split), s.detection, s.clusters) << "\n";
  jsonl << record("mean", result.mean_detection, result.mean_clusters) << "\n";
  jsonl << record("std", result.std_detection, result.std_clusters) << "\n";
  return result;
}

namespace {

std::string method_name(const SweepRow& r) {
  return r.algorithm == ClusteringAlgorithm::kOnline ? "otc" : "mbtc_b" + std::to_string(r.batch_size);
}

std::string profile_name(PreprocessMode mode) {
  return mode == PreprocessMode::kClustering ? "stopwords_excluded" : "stopwords_included";
}

}  // namespace

std::vector<SweepRow> cmd_sweep(const PipelineConfig& config, const fs::path& out_dir) {
  const auto corpus = load_input(require(config.corpus_path, "paths.corpus"), config);
  const auto rows = threshold_sweep(corpus, load_table(config), load_stop(config), config, config.sweep);

  auto tsv = open_report(out_dir, kSweepFile);
  tsv << "method\tprofile\tthreshold\thomogeneity\tcompleteness\tv_measure\n";
  for (const auto& r : rows) {
    tsv << method_name(r) << "\t" << profile_name(r.profile) << "\t" << num(r.threshold) << "\t"
        << num(r.metrics.homogeneity) << "\t" << num(r.metrics.completeness) << "\t" << num(r.metrics.v_measure)
        << "\n";
  }

  // Wide layout: one row per method, one V-measure column per (profile, threshold).
  auto table = open_report(out_dir, kSweepTableFile);
  table << "method";
  for (auto mode : config.sweep.profiles) {
    for (auto t : config.sweep.thresholds) table << "\t" << profile_name(mode) << "@" << num(t);
  }
  table << "\n";
  const std::size_t width = config.sweep.profiles.size() * config.sweep.thresholds.size();
  for (std::size_t i = 0; i < rows.size(); i += width) {
    table << method_name(rows[i]);
    for (std::size_t k = 0; k < width; ++k) table << "\t" << num(rows[i + k].metrics.v_measure);
    table << "\n";
  }
  return rows;
}

double cmd_bench(const PipelineConfig& config, const fs::path& out_dir) {
  SyntheticConfig synth = config.synth;
  const std::size_t base = synth.events * synth.messages_per_event + synth.noise_messages;
  synth.events = std::max<std::size_t>(1, synth.events * config.bench.messages / std::max<std::size_t>(base, 1));
  synth.messages_per_event = std::min(synth.messages_per_event, config.bench.messages / synth.events);
  synth.noise_messages = config.bench.messages - synth.events * synth.messages_per_event;
  synth.validate();
  const auto data = generate_synthetic(synth);
  auto table = std::make_shared<const EmbeddingTable>(data.embeddings);
  const auto features = Featurizer::build(table, load_stop(config), config, std::make_shared<IdfTable>());

  std::vector<FeatureVector> stream;
  stream.reserve(data.corpus.size());
  for (const auto& m : data.corpus.messages()) stream.push_back(features.clustering.vectorize(m.text));

  ClusteringConfig cc = config.clustering;
  cc.window = config.bench.window;
  cc.batch_size = config.bench.batch_size;
  const auto online = benchmark_clustering(stream, cc, ClusteringAlgorithm::kOnline);
  const auto batched = benchmark_clustering(stream, cc, ClusteringAlgorithm::kMiniBatch);

  auto series = [&](const char* name, const LatencySeries& s) {
    auto out = open_report(out_dir, name);
    out << "messages_clustered\tlatency_seconds\n";
    char buf[64];
    for (std::size_t i = 0; i < s.seconds.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.9f", s.seconds[i]);
      out << i + 1 << "\t" << buf << "\n";
    }
  };
  series(kBenchOnlineFile, online);
  series(kBenchMiniBatchFile, batched);

  const double ratio = online.plateau_mean > 0.0 ? batched.plateau_mean / online.plateau_mean : 0.0;
  auto summary = open_report(out_dir, kBenchSummaryFile);
  summary << "algorithm\tmessages\twindow\tbatch_size\tplateau_start\tplateau_mean_seconds\tplateau_cv\n";
  char buf[64];
  for (const auto* s : {&online, &batched}) {
    const bool is_online = s == &online;
    std::snprintf(buf, sizeof buf, "%.9f", s->plateau_mean);
    summary << (is_online ? "otc" : "mbtc") << "\t" << stream.size() << "\t" << cc.window << "\t"
            << (is_online ? 1 : cc.batch_size) << "\t" << s->plateau_start << "\t" << buf << "\t"
            << num(s->plateau_cv) << "\n";
  }
  summary << "ratio_mbtc_over_otc\t" << num(ratio) << "\n";
  return ratio;
}

std::size_t cmd_synth(const PipelineConfig& config, const fs::path& out_dir) {
  const auto data = generate_synthetic(config.synth);
  open_report(out_dir, kSynthCorpusFile).close();
  write_corpus(data.corpus, out_dir / kSynthCorpusFile, CorpusFormat::kJsonLines);
  data.embeddings.save(out_dir / kSynthEmbeddingsFile);
  return data.corpus.size();
}

}  // namespace newsdet
