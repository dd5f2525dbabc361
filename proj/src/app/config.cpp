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

#include "newsdet/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "newsdet/error.hpp"
#include "newsdet/random.hpp"

namespace newsdet {

namespace {

const std::map<std::string, std::string>& defaults() {
  static const std::map<std::string, std::string> table = {
      {"seed", "0"},
      {"jobs", "1"},
      {"paths.corpus", ""},
      {"paths.corpus_format", "jsonl"},
      {"paths.embeddings", ""},
      {"paths.stopwords", ""},
      {"paths.model", ""},
      {"paths.idf", ""},
      {"label.sport_events", ""},
      {"features.weighting", "avg"},
      {"preprocess.mention_token", "MENTION"},
      {"preprocess.url_token", "URL"},
      {"preprocess.number_token", "NUMBER"},
      {"classifier.hidden_layers", "400,400,200,100"},
      {"classifier.dropout", "0.5"},
      {"classifier.threshold", "0.5"},
      {"classifier.keep_threshold", "0.5"},
      {"train.learning_rate", "0.01"},
      {"train.momentum", "0.9"},
      {"train.batch_size", "64"},
      {"train.max_epochs", "100"},
      {"train.patience", "10"},
      {"train.validation_fraction", "0.1"},
      {"clustering.algorithm", "mbtc"},
      {"clustering.threshold", "0.23"},
      {"clustering.window", "2000"},
      {"clustering.batch_size", "50"},
      {"clustering.duplicate_epsilon", "1e-9"},
      {"detect.window", "5000"},
      {"ranking.top_k_size", "100"},
      {"ranking.top_k_growth", "100"},
      {"ranking.min_size", "5"},
      {"ranking.min_mean_confidence", "0.85"},
      {"ranking.recency_window", "86400"},
      {"ranking.min_unique_author_ratio", "0.85"},
      {"ranking.min_entropy", "5"},
      {"ranking.final_k", "20"},
      {"ranking.growth_horizon", "3600"},
      {"detection.min_candidate_size", "5"},
      {"detection.min_purity", "0.8"},
      {"split.test_fraction", "0.3"},
      {"split.min_event_size", "10"},
      {"split.max_event_size", "400"},
      {"evaluate.n_splits", "20"},
      {"sweep.algorithms", "otc,mbtc"},
      {"sweep.batch_sizes", "50,100,200,400"},
      {"sweep.thresholds", "0.05,0.15,0.20,0.25,0.35"},
      {"sweep.profiles", "classification,clustering"},
      {"bench.messages", "30000"},
      {"bench.window", "10000"},
      {"bench.batch_size", "50"},
      {"synth.events", "20"},
      {"synth.messages_per_event", "30"},
      {"synth.noise_messages", "600"},
      {"synth.vocab_per_event", "120"},
      {"synth.background_vocab", "3000"},
      {"synth.dimension", "64"},
      {"synth.start_time", "1349049600"},
      {"synth.time_span", "345600"},
      {"synth.event_duration", "28800"},
      {"synth.min_content_tokens", "7"},
      {"synth.max_content_tokens", "11"},
      {"synth.min_stopwords", "2"},
      {"synth.max_stopwords", "6"},
      {"synth.authors", "20000"},
      {"synth.topic_weight", "1.0"},
      {"synth.style_weight", "1.5"},
      {"synth.word_noise", "2.0"},
      {"synth.stopword_weight", "1.0"},
      {"synth.stopword_noise", "2.0"},
      {"synth.decoration_rate", "0.25"},
  };
  return table;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  fail(ErrorCode::kInvalidArgument, "config key '" + key + "': expected " + expected + ", got '" + value + "'");
}

template <typename T>
T parse_integer(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || value.empty()) bad_value(key, value, "an integer");
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || value.empty()) bad_value(key, value, "a number");
  return out;
}

class Reader {
 public:
  explicit Reader(const Config& config) : config_(config) {}

  const std::string& str(const std::string& key) const { return config_.get(key); }
  std::uint64_t u64(const std::string& key) const { return parse_integer<std::uint64_t>(key, str(key)); }
  std::int64_t i64(const std::string& key) const { return parse_integer<std::int64_t>(key, str(key)); }
  std::size_t size(const std::string& key) const { return parse_integer<std::size_t>(key, str(key)); }
  double real(const std::string& key) const { return parse_real(key, str(key)); }

  std::vector<std::size_t> sizes(const std::string& key) const {
    std::vector<std::size_t> out;
    for (const auto& item : split_list(str(key))) out.push_back(parse_integer<std::size_t>(key, item));
    return out;
  }
  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(str(key))) out.push_back(parse_real(key, item));
    return out;
  }

 private:
  const Config& config_;
};

PreprocessMode parse_profile(const std::string& key, const std::string& value) {
  if (value == "classification") return PreprocessMode::kClassification;
  if (value == "clustering") return PreprocessMode::kClustering;
  bad_value(key, value, "classification or clustering");
}

}  // namespace

Config::Config() : values_(defaults()) {}

void Config::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  parse(buffer.str(), path.string());
}

void Config::parse(std::string_view text, std::string_view origin) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::kParse, std::string(origin) + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(std::string_view(body).substr(0, eq));
    const auto value = trim(std::string_view(body).substr(eq + 1));
    if (!values_.contains(key)) {
      fail(ErrorCode::kInvalidArgument,
           std::string(origin) + ":" + std::to_string(line_no) + ": unknown config key '" + key + "'");
    }
    values_[key] = value;
  }
}

void Config::set(const std::string& key, const std::string& value) {
  if (!values_.contains(key)) fail(ErrorCode::kInvalidArgument, "unknown config key '" + key + "'");
  values_[key] = trim(value);
}

const std::string& Config::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) fail(ErrorCode::kInvalidArgument, "unknown config key '" + key + "'");
  return it->second;
}

std::string Config::dump() const {
  std::string out;
  for (const auto& [key, value] : values_) out += key + " = " + value + "\n";
  return out;
}

PipelineConfig PipelineConfig::from(const Config& config) {
  const Reader r(config);
  PipelineConfig p;
  p.seed = r.u64("seed");
  p.jobs = r.size("jobs");
  if (p.jobs == 0) bad_value("jobs", r.str("jobs"), "a positive integer");

  p.corpus_path = r.str("paths.corpus");
  p.corpus_format = parse_corpus_format(r.str("paths.corpus_format"));
  p.embeddings_path = r.str("paths.embeddings");
  p.stopwords_path = r.str("paths.stopwords");
  p.model_path = r.str("paths.model");
  p.idf_path = r.str("paths.idf");
  for (auto& id : split_list(r.str("label.sport_events"))) p.sport_events.insert(std::move(id));

  const auto& weighting = r.str("features.weighting");
  if (weighting == "avg") {
    p.weighting = Weighting::kAverage;
  } else if (weighting == "idf") {
    p.weighting = Weighting::kIdf;
  } else {
    bad_value("features.weighting", weighting, "avg or idf");
  }
  p.mention_token = r.str("preprocess.mention_token");
  p.url_token = r.str("preprocess.url_token");
  p.number_token = r.str("preprocess.number_token");

  p.architecture.hidden_layers = r.sizes("classifier.hidden_layers");
  p.architecture.dropout_rate = r.real("classifier.dropout");
  p.architecture.decision_threshold = r.real("classifier.threshold");
  {
    NetworkArchitecture probe = p.architecture;  // input_dim comes from the embedding table later
    probe.input_dim = 1;
    try {
      probe.validate();
    } catch (const Error& e) {
      fail(ErrorCode::kInvalidArgument, std::string("classifier settings: ") + e.what());
    }
  }
  p.keep_threshold = r.real("classifier.keep_threshold");
  if (!(p.keep_threshold >= 0.0 && p.keep_threshold <= 1.0)) {
    bad_value("classifier.keep_threshold", r.str("classifier.keep_threshold"), "a value in [0, 1]");
  }

  p.training.learning_rate = r.real("train.learning_rate");
  p.training.momentum = r.real("train.momentum");
  p.training.batch_size = r.size("train.batch_size");
  p.training.max_epochs = r.size("train.max_epochs");
  p.training.patience = r.size("train.patience");
  p.training.validation_fraction = r.real("train.validation_fraction");
  p.training.seed = derive_seed(p.seed, "train");
  p.training.validate();

  p.algorithm = parse_clustering_algorithm(r.str("clustering.algorithm"));
  p.clustering.threshold = r.real("clustering.threshold");
  p.clustering.window = r.size("clustering.window");
  p.clustering.batch_size = r.size("clustering.batch_size");
  p.clustering.duplicate_epsilon = r.real("clustering.duplicate_epsilon");
  p.clustering.validate();
  p.detect_window = r.size("detect.window");
  if (p.detect_window == 0) bad_value("detect.window", r.str("detect.window"), "a positive integer");

  p.ranking.top_k_size = r.size("ranking.top_k_size");
  p.ranking.top_k_growth = r.size("ranking.top_k_growth");
  p.ranking.min_size = r.size("ranking.min_size");
  p.ranking.min_mean_confidence = r.real("ranking.min_mean_confidence");
  p.ranking.recency_window = r.i64("ranking.recency_window");
  p.ranking.min_unique_author_ratio = r.real("ranking.min_unique_author_ratio");
  p.ranking.min_entropy = r.real("ranking.min_entropy");
  p.ranking.final_k = r.size("ranking.final_k");
  p.ranking.growth_horizon = r.i64("ranking.growth_horizon");
  p.ranking.validate();

  p.detection.min_candidate_size = r.size("detection.min_candidate_size");
  p.detection.min_purity = r.real("detection.min_purity");
  p.detection.validate();

  p.split.seed = derive_seed(p.seed, "split");
  p.split.test_fraction = r.real("split.test_fraction");
  p.split.min_event_size = r.size("split.min_event_size");
  p.split.max_event_size = r.size("split.max_event_size");
  p.split.validate();
  p.n_splits = r.size("evaluate.n_splits");
  if (p.n_splits == 0) bad_value("evaluate.n_splits", r.str("evaluate.n_splits"), "a positive integer");

  p.sweep.algorithms.clear();
  for (const auto& name : split_list(r.str("sweep.algorithms"))) {
    p.sweep.algorithms.push_back(parse_clustering_algorithm(name));
  }
  p.sweep.batch_sizes = r.sizes("sweep.batch_sizes");
  p.sweep.thresholds = r.reals("sweep.thresholds");
  p.sweep.profiles.clear();
  for (const auto& name : split_list(r.str("sweep.profiles"))) {
    p.sweep.profiles.push_back(parse_profile("sweep.profiles", name));
  }
  if (p.sweep.algorithms.empty() || p.sweep.thresholds.empty() || p.sweep.profiles.empty()) {
    fail(ErrorCode::kInvalidArgument, "sweep grid must name at least one algorithm, threshold and profile");
  }
  for (auto b : p.sweep.batch_sizes) {
    if (b == 0) bad_value("sweep.batch_sizes", r.str("sweep.batch_sizes"), "positive batch sizes");
  }
  for (auto t : p.sweep.thresholds) {
    if (!(t >= 0.0 && t <= 2.0)) bad_value("sweep.thresholds", r.str("sweep.thresholds"), "thresholds in [0, 2]");
  }

  p.bench.messages = r.size("bench.messages");
  p.bench.window = r.size("bench.window");
  p.bench.batch_size = r.size("bench.batch_size");
  if (p.bench.window == 0 || p.bench.batch_size == 0 || p.bench.messages <= p.bench.window) {
    fail(ErrorCode::kInvalidArgument, "bench needs window > 0, batch_size > 0 and messages > window");
  }

  p.synth.seed = p.seed;
  p.synth.events = r.size("synth.events");
  p.synth.messages_per_event = r.size("synth.messages_per_event");
  p.synth.noise_messages = r.size("synth.noise_messages");
  p.synth.vocab_per_event = r.size("synth.vocab_per_event");
  p.synth.background_vocab = r.size("synth.background_vocab");
  p.synth.dimension = r.size("synth.dimension");
  p.synth.start_time = r.i64("synth.start_time");
  p.synth.time_span = r.i64("synth.time_span");
  p.synth.event_duration = r.i64("synth.event_duration");
  p.synth.min_content_tokens = r.size("synth.min_content_tokens");
  p.synth.max_content_tokens = r.size("synth.max_content_tokens");
  p.synth.min_stopwords = r.size("synth.min_stopwords");
  p.synth.max_stopwords = r.size("synth.max_stopwords");
  p.synth.authors = r.size("synth.authors");
  p.synth.topic_weight = r.real("synth.topic_weight");
  p.synth.style_weight = r.real("synth.style_weight");
  p.synth.word_noise = r.real("synth.word_noise");
  p.synth.stopword_weight = r.real("synth.stopword_weight");
  p.synth.stopword_noise = r.real("synth.stopword_noise");
  p.synth.decoration_rate = r.real("synth.decoration_rate");
  p.synth.validate();
  return p;
}

}  // namespace newsdet
