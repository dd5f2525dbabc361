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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "newsdet/corpus.hpp"
#include "newsdet/embedding.hpp"

namespace newsdet {

/// Fully connected ReLU network with inverted dropout on every hidden layer
/// and a single sigmoid output giving P(event).
struct NetworkArchitecture {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden_layers{400, 400, 200, 100};
  double dropout_rate = 0.5;
  double decision_threshold = 0.5;

  void validate() const;
};

struct TrainingConfig {
  double learning_rate = 0.01;
  double momentum = 0.9;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 100;
  std::size_t patience = 10;
  double validation_fraction = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;     // out
};

struct TrainingMetadata {
  std::size_t epochs_run = 0;
  double validation_accuracy = 0.0;
  std::uint64_t seed = 0;
};

struct Prediction {
  MessageClass label = MessageClass::kNotEvent;
  double confidence = 0.0;  // P(event)
};

class ClassifierModel {
 public:
  ClassifierModel(NetworkArchitecture architecture, std::vector<DenseLayer> layers,
                  TrainingMetadata metadata = {});

  /// Uniform(-sqrt(6 / fan_in), sqrt(6 / fan_in)) weights, zero biases.
  static ClassifierModel initialize(const NetworkArchitecture& architecture, std::uint64_t seed);

  const NetworkArchitecture& architecture() const noexcept { return architecture_; }
  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  std::vector<DenseLayer>& mutable_layers() noexcept { return layers_; }
  const TrainingMetadata& metadata() const noexcept { return metadata_; }
  void set_metadata(const TrainingMetadata& metadata) { metadata_ = metadata; }

  /// Output logits for a column-per-sample input; dropout off.
  Eigen::RowVectorXd logits(const Eigen::MatrixXd& inputs) const;

  Prediction predict(std::span<const double> features) const;
  Prediction predict(const FeatureVector& features) const { return predict(features.values()); }

  std::size_t parameter_count() const;

 private:
  void check_shapes() const;

  NetworkArchitecture architecture_;
  std::vector<DenseLayer> layers_;
  TrainingMetadata metadata_;
};

struct LabeledExample {
  FeatureVector features;
  MessageClass label = MessageClass::kNotEvent;
};

struct TrainingReport {
  ClassifierModel model;
  std::vector<double> train_loss;           // per epoch, dropout off, training slice
  std::vector<double> validation_accuracy;  // per epoch
};

/// Mini-batch SGD with momentum on binary cross-entropy. The last
/// `validation_fraction` of a seeded shuffle is held out; training stops
/// after `patience` epochs without validation improvement and the
/// best-scoring weights are kept.
TrainingReport train(std::span<const LabeledExample> examples, const NetworkArchitecture& architecture,
                     const TrainingConfig& config);

struct BinaryMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::size_t true_positive = 0;
  std::size_t false_positive = 0;
  std::size_t true_negative = 0;
  std::size_t false_negative = 0;
};

BinaryMetrics evaluate_classifier(const ClassifierModel& model, std::span<const LabeledExample> test);
BinaryMetrics binary_metrics(std::span<const MessageClass> predicted, std::span<const MessageClass> truth);

/// Mean binary cross-entropy and parameter gradients for one batch, dropout
/// off. Gradients are laid out like ClassifierModel::layers().
struct LossAndGradient {
  double loss = 0.0;
  std::vector<DenseLayer> gradient;
};
LossAndGradient loss_and_gradient(const ClassifierModel& model, const Eigen::MatrixXd& inputs,
                                  const Eigen::RowVectorXd& targets);

/// Compares backpropagation against central differences with step `epsilon`.
/// Relative error per parameter is |a - n| / max(|a|, |n|, 1e-6).
double gradient_check(const ClassifierModel& model, std::span<const double> input, double target,
                      double epsilon = 1e-5);

/// Zeroes each entry with probability `rate` and scales survivors by
/// 1 / (1 - rate).
void apply_inverted_dropout(Eigen::MatrixXd& activations, double rate, std::mt19937_64& rng);

void save_model(const ClassifierModel& model, const std::filesystem::path& path);
ClassifierModel load_model(const std::filesystem::path& path);

}  // namespace newsdet
