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

#include <cctype>
#include <fstream>
#include <sstream>

#include "newsdet/embedding.hpp"
#include "newsdet/error.hpp"
#include "stopwords_data.hpp"

namespace newsdet {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i]) return false;
  }
  return true;
}

// Leading '#', '@' and number-sign characters survive the first pass so that
// hashtags, mentions and signed numbers can still be recognised.
std::string_view strip_edges(std::string_view token) {
  std::size_t begin = 0, end = token.size();
  while (end > begin && is_punct(token[end - 1])) --end;
  while (begin < end && is_punct(token[begin]) && token[begin] != '#' && token[begin] != '@' &&
         token[begin] != '+' && token[begin] != '-' && token[begin] != '.') {
    ++begin;
  }
  return token.substr(begin, end - begin);
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

StopwordSet parse_stopwords(std::istream& in) {
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t b = 0, e = line.size();
    while (b < e && is_space(line[b])) ++b;
    while (e > b && is_space(line[e - 1])) --e;
    if (e > b) words.insert(ascii_lower(std::string_view(line).substr(b, e - b)));
  }
  return words;
}

}  // namespace

bool is_number_token(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t int_digits = 0, frac_digits = 0;
  while (i < s.size() && is_digit(s[i])) ++i, ++int_digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && is_digit(s[i])) ++i, ++frac_digits;
  }
  return i == s.size() && (int_digits + frac_digits) > 0;
}

bool is_url_token(std::string_view s) {
  return starts_with_ci(s, "http://") || starts_with_ci(s, "https://") || starts_with_ci(s, "www.");
}

std::shared_ptr<const StopwordSet> default_stopwords() {
  static const auto words = [] {
    std::istringstream in{std::string(detail::kBundledStopwords)};
    return std::make_shared<const StopwordSet>(parse_stopwords(in));
  }();
  return words;
}

std::shared_ptr<const StopwordSet> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot read stopword file " + path.string());
  auto words = parse_stopwords(in);
  if (words.empty()) fail(ErrorCode::kParse, "stopword file " + path.string() + " is empty");
  return std::make_shared<const StopwordSet>(std::move(words));
}

PreprocessProfile PreprocessProfile::classification() { return PreprocessProfile{}; }

PreprocessProfile PreprocessProfile::clustering(std::shared_ptr<const StopwordSet> stopwords) {
  PreprocessProfile profile;
  profile.mode = PreprocessMode::kClustering;
  profile.lowercase = true;
  profile.stopwords = stopwords ? std::move(stopwords) : default_stopwords();
  return profile;
}

void PreprocessProfile::validate() const {
  if (mode == PreprocessMode::kClustering && (!lowercase || !stopwords || stopwords->empty())) {
    fail(ErrorCode::kInvalidArgument, "clustering profile requires lowercasing and a non-empty stopword set");
  }
  if (mention_token.empty() || url_token.empty() || number_token.empty()) {
    fail(ErrorCode::kInvalidArgument, "replacement tokens must be non-empty");
  }
}

Tokens preprocess(std::string_view text, const PreprocessProfile& profile) {
  const bool clustering = profile.mode == PreprocessMode::kClustering;
  Tokens tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i == start) break;

    std::string_view core = strip_edges(text.substr(start, i - start));
    if (core.empty()) continue;
    if (is_url_token(core)) {
      if (!clustering) tokens.push_back(profile.url_token);
      continue;
    }
    if (core.size() > 1 && core[0] == '@') {
      tokens.push_back(profile.mention_token);
      continue;
    }
    if (is_number_token(core)) {
      tokens.push_back(profile.number_token);
      continue;
    }
    while (!core.empty() && (core[0] == '@' || core[0] == '+' || core[0] == '-' || core[0] == '.')) {
      core.remove_prefix(1);
    }
    if (clustering) {
      while (!core.empty() && core[0] == '#') core.remove_prefix(1);
    }
    if (core.empty() || core == "#") continue;

    std::string token = profile.lowercase ? ascii_lower(core) : std::string(core);
    if (clustering && profile.stopwords->contains(token)) continue;
    tokens.push_back(std::move(token));
  }
  return tokens;
}

}  // namespace newsdet
