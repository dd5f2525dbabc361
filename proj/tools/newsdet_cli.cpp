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

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "newsdet/newsdet.h"

namespace {

struct Options {
  std::string config;
  std::string seed;
  std::string jobs;
  std::string out = ".";
  std::string input;
};

int die(const std::string& message) {
  std::fprintf(stderr, "newsdet: %s\n", message.c_str());
  return 1;
}

int die(nd_status status) {
  return die(std::string(nd_status_name(status)) + ": " + nd_last_error());
}

// Turns "--key=value" / "--key value" leftovers into config overrides.
bool apply_overrides(nd_config* config, const std::vector<std::string>& extras, std::string& error) {
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& arg = extras[i];
    if (arg.rfind("--", 0) != 0 || arg.size() == 2) {
      error = "unexpected argument '" + arg + "'";
      return false;
    }
    std::string key = arg.substr(2);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key.resize(eq);
    } else if (i + 1 < extras.size()) {
      value = extras[++i];
    } else {
      error = "missing value for '" + arg + "'";
      return false;
    }
    if (nd_config_set(config, key.c_str(), value.c_str()) != ND_OK) {
      error = nd_last_error();
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming news event detection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", nd_version());

  Options opt;
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"train", "Train the message classifier"},
      {"detect", "Classify, cluster and rank a message stream"},
      {"evaluate", "Run the repeated split evaluation protocol"},
      {"sweep", "Clustering quality over a threshold grid"},
      {"bench", "Per-message clustering latency of both algorithms"},
      {"synth", "Write a synthetic labeled corpus and embedding table"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->allow_extras();
    sub->add_option("--config", opt.config, "Configuration file (key = value lines)");
    sub->add_option("--seed", opt.seed, "Master seed");
    sub->add_option("--jobs", opt.jobs, "Worker threads");
    sub->add_option("--out", opt.out, "Output directory")->capture_default_str();
    if (std::string(name) == "detect") sub->add_option("--input", opt.input, "Message stream to process");
  }
  app.footer("Any configuration key may be overridden with --<dotted.key>=<value>.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();

  nd_config* config = nullptr;
  if (auto s = nd_config_create(&config); s != ND_OK) return die(s);
  std::unique_ptr<nd_config, void (*)(nd_config*)> guard(config, nd_config_destroy);

  if (!opt.config.empty()) {
    if (auto s = nd_config_load(config, opt.config.c_str()); s != ND_OK) return die(s);
  }
  std::string error;
  if (!apply_overrides(config, sub->remaining(), error)) return die(error);
  if (!opt.seed.empty()) {
    if (auto s = nd_config_set(config, "seed", opt.seed.c_str()); s != ND_OK) return die(s);
  }
  if (!opt.jobs.empty()) {
    if (auto s = nd_config_set(config, "jobs", opt.jobs.c_str()); s != ND_OK) return die(s);
  }
  if (auto s = nd_config_validate(config); s != ND_OK) return die(s);

  const char* out = opt.out.c_str();
  nd_status status = ND_OK;
  if (command == "train") {
    double accuracy = 0.0;
    status = nd_cmd_train(config, out, &accuracy);
    if (status == ND_OK) std::printf("validation_accuracy\t%.6f\n", accuracy);
  } else if (command == "detect") {
    std::size_t candidates = 0;
    status = nd_cmd_detect(config, opt.input.empty() ? nullptr : opt.input.c_str(), out, &candidates);
    if (status == ND_OK) std::printf("candidates\t%zu\n", candidates);
  } else if (command == "evaluate") {
    double f1 = 0.0;
    status = nd_cmd_evaluate(config, out, &f1);
    if (status == ND_OK) std::printf("mean_f1\t%.6f\n", f1);
  } else if (command == "sweep") {
    std::size_t rows = 0;
    status = nd_cmd_sweep(config, out, &rows);
    if (status == ND_OK) std::printf("rows\t%zu\n", rows);
  } else if (command == "bench") {
    double ratio = 0.0;
    status = nd_cmd_bench(config, out, &ratio);
    if (status == ND_OK) std::printf("ratio_mbtc_over_otc\t%.6f\n", ratio);
  } else if (command == "synth") {
    std::size_t messages = 0;
    status = nd_cmd_synth(config, out, &messages);
    if (status == ND_OK) std::printf("messages\t%zu\n", messages);
  }
  return status == ND_OK ? EXIT_SUCCESS : die(status);
}
