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

#include "newsdet/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "newsdet/error.hpp"

namespace newsdet {
namespace {

using Vec = std::vector<double>;

class Generator {
 public:
  Generator(const SyntheticConfig& config) : config_(config), rng_(config.seed) {}

  SyntheticCorpus run();

 private:
  Vec gaussian() {
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(config_.dimension)));
    Vec v(config_.dimension);
    for (double& x : v) x = normal(rng_);
    return v;
  }

  Vec unit() {
    Vec v = gaussian();
    double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    for (double& x : v) x /= norm;
    return v;
  }

  // a * x + b * y + c * noise
  Vec blend(double a, const Vec& x, double b, const Vec& y, double c) {
    Vec noise = gaussian();
    Vec out(config_.dimension);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + b * y[i] + c * noise[i];
    return out;
  }

  std::string pseudo_word() {
    static constexpr std::string_view kConsonants = "bcdfghjklmnprstvz";
    static constexpr std::string_view kVowels = "aeiou";
    std::uniform_int_distribution<std::size_t> syllables(2, 4);
    std::uniform_int_distribution<std::size_t> consonant(0, kConsonants.size() - 1);
    std::uniform_int_distribution<std::size_t> vowel(0, kVowels.size() - 1);
    const auto& stop = *default_stopwords();
    while (true) {
      std::string word;
      for (std::size_t s = syllables(rng_); s > 0; --s) {
        word += kConsonants[consonant(rng_)];
        word += kVowels[vowel(rng_)];
      }
      if (!stop.contains(word) && used_.insert(word).second) return word;
    }
  }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  std::size_t between(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::string compose(const std::vector<std::string>& vocab);

  const SyntheticConfig& config_;
  std::mt19937_64 rng_;
  std::set<std::string> used_;
  std::vector<std::string> stopwords_;
};

std::string Generator::compose(const std::vector<std::string>& vocab) {
  std::vector<std::string> words;
  const std::size_t content = between(config_.min_content_tokens, config_.max_content_tokens);
  for (std::size_t i = 0; i < content; ++i) words.push_back(vocab[pick(vocab.size())]);
  if (chance(config_.decoration_rate)) words[pick(words.size())].insert(0, "#");
  const std::size_t stops = between(config_.min_stopwords, config_.max_stopwords);
  for (std::size_t i = 0; i < stops; ++i) {
    words.insert(words.begin() + static_cast<std::ptrdiff_t>(pick(words.size() + 1)), stopwords_[pick(stopwords_.size())]);
  }
  if (chance(config_.decoration_rate)) {
    words.insert(words.begin() + static_cast<std::ptrdiff_t>(pick(words.size() + 1)), std::to_string(between(1, 999)));
  }
  if (chance(config_.decoration_rate)) words.insert(words.begin(), "@user" + std::to_string(pick(config_.authors)));
  if (chance(config_.decoration_rate)) {
    static constexpr std::string_view kAlnum = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::string url = "http://t.co/";
    for (int i = 0; i < 8; ++i) url += kAlnum[pick(kAlnum.size())];
    words.push_back(url);
  }
  if (chance(config_.decoration_rate)) {
    auto& first = words.front();
    if (!first.empty() && first[0] >= 'a' && first[0] <= 'z') first[0] = static_cast<char>(first[0] - 'a' + 'A');
  }
  if (chance(config_.decoration_rate)) words.back() += chance(0.5) ? "!" : ".";

  std::string text;
  for (const auto& w : words) {
    if (!text.empty()) text += ' ';
    text += w;
  }
  return text;
}

SyntheticCorpus Generator::run() {
  const auto& stop = *default_stopwords();
  stopwords_.assign(stop.begin(), stop.end());
  std::sort(stopwords_.begin(), stopwords_.end());

  EmbeddingTable table(config_.dimension);
  const Vec news_axis = unit();
  const Vec chatter_axis = unit();
  const Vec stop_axis = unit();
  const Vec none(config_.dimension, 0.0);

  for (const auto& word : stopwords_) {
    table.insert(word, blend(config_.stopword_weight, stop_axis, 0.0, none, config_.stopword_noise));
  }
  for (const char* special : {"MENTION", "URL", "NUMBER"}) table.insert(special, unit());

  std::vector<std::vector<std::string>> event_vocab(config_.events);
  for (auto& vocab : event_vocab) {
    const Vec centroid = unit();
    for (std::size_t i = 0; i < config_.vocab_per_event; ++i) {
      vocab.push_back(pseudo_word());
      table.insert(vocab.back(), blend(config_.topic_weight, centroid, config_.style_weight, news_axis,
                                       config_.word_noise));
    }
  }
  std::vector<std::string> background;
  for (std::size_t i = 0; i < config_.background_vocab; ++i) {
    background.push_back(pseudo_word());
    table.insert(background.back(), blend(config_.style_weight, chatter_axis, 0.0, none, config_.word_noise));
  }

  struct Draft {
    std::int64_t timestamp;
    std::string author;
    std::string text;
    std::optional<std::string> event;
  };
  std::vector<Draft> drafts;
  auto author = [&] { return "u" + std::to_string(pick(config_.authors)); };
  const std::int64_t latest_start = config_.start_time + config_.time_span - config_.event_duration;
  for (std::size_t e = 0; e < config_.events; ++e) {
    const std::int64_t begin =
        std::uniform_int_distribution<std::int64_t>(config_.start_time, latest_start)(rng_);
    char id[16];
    std::snprintf(id, sizeof id, "ev%03zu", e);
    for (std::size_t m = 0; m < config_.messages_per_event; ++m) {
      const std::int64_t t = begin + std::uniform_int_distribution<std::int64_t>(0, config_.event_duration)(rng_);
      drafts.push_back({t, author(), compose(event_vocab[e]), std::string(id)});
    }
  }
  for (std::size_t n = 0; n < config_.noise_messages; ++n) {
    const std::int64_t t = std::uniform_int_distribution<std::int64_t>(
        config_.start_time, config_.start_time + config_.time_span)(rng_);
    drafts.push_back({t, author(), compose(background), std::nullopt});
  }
  std::stable_sort(drafts.begin(), drafts.end(),
                   [](const Draft& a, const Draft& b) { return a.timestamp < b.timestamp; });

  std::vector<Message> messages;
  std::vector<Label> labels;
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    char id[24];
    std::snprintf(id, sizeof id, "m%06zu", i);
    messages.push_back({id, drafts[i].author, drafts[i].timestamp, drafts[i].text});
    labels.push_back(drafts[i].event ? Label::event(*drafts[i].event) : Label::not_event());
  }
  return {Corpus(std::move(messages), std::move(labels), true), std::move(table)};
}

}  // namespace

void SyntheticConfig::validate() const {
  auto bad = [](const char* what) { fail(ErrorCode::kInvalidArgument, std::string("synthetic config: ") + what); };
  if (dimension == 0) bad("dimension must be positive");
  if (events > 0 && (messages_per_event == 0 || vocab_per_event == 0)) bad("events need messages and vocabulary");
  if (noise_messages > 0 && background_vocab == 0) bad("noise messages need a background vocabulary");
  if (events == 0 && noise_messages == 0) bad("nothing to generate");
  if (min_content_tokens == 0 || min_content_tokens > max_content_tokens) bad("invalid content token range");
  if (min_stopwords > max_stopwords) bad("invalid stopword range");
  if (authors == 0) bad("authors must be positive");
  if (time_span <= 0 || event_duration < 0 || event_duration > time_span) bad("invalid time span");
  if (start_time < 0) bad("start_time must be non-negative");
  if (!(decoration_rate >= 0.0 && decoration_rate <= 1.0)) bad("decoration_rate must lie in [0, 1]");
  if (word_noise < 0.0 || stopword_noise < 0.0) bad("noise scales must be non-negative");
}

SyntheticCorpus generate_synthetic(const SyntheticConfig& config) {
  config.validate();
  return Generator(config).run();
}

}  // namespace newsdet
