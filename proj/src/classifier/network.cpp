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
#include <numeric>

#include "newsdet/classifier.hpp"
#include "newsdet/error.hpp"
#include "newsdet/random.hpp"

namespace newsdet {
namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z) without overflow
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

struct ForwardPass {
  std::vector<Eigen::MatrixXd> pre;          // hidden pre-activations
  std::vector<Eigen::MatrixXd> activations;  // [0] = inputs, then hidden outputs after dropout
  std::vector<Eigen::MatrixXd> masks;        // scaled dropout masks, empty when dropout is off
  Eigen::RowVectorXd logits;
};

ForwardPass forward(const std::vector<DenseLayer>& layers, const Eigen::MatrixXd& inputs, double dropout,
                    std::mt19937_64* rng) {
  ForwardPass pass;
  pass.activations.push_back(inputs);
  const std::size_t hidden = layers.size() - 1;
  for (std::size_t l = 0; l < hidden; ++l) {
    Eigen::MatrixXd z = (layers[l].weights * pass.activations.back()).colwise() + layers[l].bias;
    Eigen::MatrixXd a = z.cwiseMax(0.0);
    if (rng != nullptr && dropout > 0.0) {
      Eigen::MatrixXd mask = Eigen::MatrixXd::Ones(a.rows(), a.cols());
      apply_inverted_dropout(mask, dropout, *rng);
      a.array() *= mask.array();
      pass.masks.push_back(std::move(mask));
    }
    pass.pre.push_back(std::move(z));
    pass.activations.push_back(std::move(a));
  }
  pass.logits = (layers.back().weights * pass.activations.back()).colwise() + layers.back().bias;
  return pass;
}

double mean_loss(const Eigen::RowVectorXd& logits, const Eigen::RowVectorXd& targets) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) total += softplus(logits[i]) - targets[i] * logits[i];
  return total / static_cast<double>(logits.size());
}

std::vector<DenseLayer> backward(const std::vector<DenseLayer>& layers, const ForwardPass& pass,
                                 const Eigen::RowVectorXd& targets) {
  const double n = static_cast<double>(targets.size());
  std::vector<DenseLayer> grad(layers.size());
  Eigen::MatrixXd delta(1, targets.size());
  for (Eigen::Index i = 0; i < targets.size(); ++i) delta(0, i) = (sigmoid(pass.logits[i]) - targets[i]) / n;

  for (std::size_t l = layers.size(); l-- > 0;) {
    const Eigen::MatrixXd& input = pass.activations[l];
    grad[l].weights = delta * input.transpose();
    grad[l].bias = delta.rowwise().sum();
    if (l == 0) break;
    Eigen::MatrixXd upstream = layers[l].weights.transpose() * delta;
    if (!pass.masks.empty()) upstream.array() *= pass.masks[l - 1].array();
    delta = (pass.pre[l - 1].array() > 0.0).select(upstream, 0.0);
  }
  return grad;
}

Eigen::MatrixXd to_matrix(std::span<const LabeledExample> examples, std::size_t dim) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(examples.size()));
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto values = examples[i].features.values();
    if (values.size() != dim) {
      fail(ErrorCode::kDimensionMismatch, "feature dimension " + std::to_string(values.size()) +
                                              " does not match input_dim " + std::to_string(dim));
    }
    for (std::size_t j = 0; j < dim; ++j) x(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = values[j];
  }
  return x;
}

double accuracy(const ClassifierModel& model, const Eigen::MatrixXd& x, const Eigen::RowVectorXd& y) {
  if (y.size() == 0) return 0.0;
  const Eigen::RowVectorXd logits = model.logits(x);
  const double threshold = model.architecture().decision_threshold;
  std::size_t correct = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const bool event = sigmoid(logits[i]) >= threshold;
    correct += event == (y[i] > 0.5) ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(y.size());
}

}  // namespace

void NetworkArchitecture::validate() const {
  if (input_dim == 0) fail(ErrorCode::kInvalidArgument, "classifier input_dim must be positive");
  if (std::any_of(hidden_layers.begin(), hidden_layers.end(), [](std::size_t w) { return w == 0; })) {
    fail(ErrorCode::kInvalidArgument, "hidden layer widths must be positive");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "dropout rate must lie in [0, 1)");
  }
  if (!(decision_threshold >= 0.0 && decision_threshold <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "decision threshold must lie in [0, 1]");
  }
}

void TrainingConfig::validate() const {
  if (!(learning_rate > 0.0)) fail(ErrorCode::kInvalidArgument, "learning rate must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) fail(ErrorCode::kInvalidArgument, "momentum must lie in [0, 1)");
  if (batch_size == 0 || max_epochs == 0) {
    fail(ErrorCode::kInvalidArgument, "batch size and max epochs must be positive");
  }
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "validation fraction must lie in [0, 1)");
  }
}

ClassifierModel::ClassifierModel(NetworkArchitecture architecture, std::vector<DenseLayer> layers,
                                 TrainingMetadata metadata)
    : architecture_(std::move(architecture)), layers_(std::move(layers)), metadata_(metadata) {
  architecture_.validate();
  check_shapes();
}

void ClassifierModel::check_shapes() const {
  if (layers_.size() != architecture_.hidden_layers.size() + 1) {
    fail(ErrorCode::kInvalidArgument, "layer count does not match the architecture");
  }
  auto in = static_cast<Eigen::Index>(architecture_.input_dim);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    auto out = static_cast<Eigen::Index>(l < architecture_.hidden_layers.size() ? architecture_.hidden_layers[l] : 1);
    if (layers_[l].weights.rows() != out || layers_[l].weights.cols() != in || layers_[l].bias.size() != out) {
      fail(ErrorCode::kInvalidArgument, "layer " + std::to_string(l) + " shape does not chain");
    }
    in = out;
  }
}

ClassifierModel ClassifierModel::initialize(const NetworkArchitecture& architecture, std::uint64_t seed) {
  architecture.validate();
  std::mt19937_64 rng(seed);
  std::vector<DenseLayer> layers;
  std::size_t in = architecture.input_dim;
  std::vector<std::size_t> widths = architecture.hidden_layers;
  widths.push_back(1);
  for (std::size_t out : widths) {
    const double limit = std::sqrt(6.0 / static_cast<double>(in));
    std::uniform_real_distribution<double> dist(-limit, limit);
    DenseLayer layer{Eigen::MatrixXd(out, in), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out))};
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) layer.weights(r, c) = dist(rng);
    }
    layers.push_back(std::move(layer));
    in = out;
  }
  return ClassifierModel(architecture, std::move(layers), TrainingMetadata{0, 0.0, seed});
}

Eigen::RowVectorXd ClassifierModel::logits(const Eigen::MatrixXd& inputs) const {
  if (inputs.rows() != static_cast<Eigen::Index>(architecture_.input_dim)) {
    fail(ErrorCode::kDimensionMismatch, "input has " + std::to_string(inputs.rows()) + " features, model expects " +
                                            std::to_string(architecture_.input_dim));
  }
  return forward(layers_, inputs, 0.0, nullptr).logits;
}

Prediction ClassifierModel::predict(std::span<const double> features) const {
  if (features.size() != architecture_.input_dim) {
    fail(ErrorCode::kDimensionMismatch, "input has " + std::to_string(features.size()) + " features, model expects " +
                                            std::to_string(architecture_.input_dim));
  }
  Eigen::MatrixXd x = Eigen::Map<const Eigen::VectorXd>(features.data(), static_cast<Eigen::Index>(features.size()));
  const double confidence = sigmoid(logits(x)[0]);
  return {confidence >= architecture_.decision_threshold ? MessageClass::kEvent : MessageClass::kNotEvent,
          confidence};
}

std::size_t ClassifierModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers_) n += static_cast<std::size_t>(layer.weights.size() + layer.bias.size());
  return n;
}

void apply_inverted_dropout(Eigen::MatrixXd& activations, double rate, std::mt19937_64& rng) {
  if (rate <= 0.0) return;
  const double scale = 1.0 / (1.0 - rate);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Eigen::Index c = 0; c < activations.cols(); ++c) {
    for (Eigen::Index r = 0; r < activations.rows(); ++r) {
      activations(r, c) = u(rng) < rate ? 0.0 : activations(r, c) * scale;
    }
  }
}

LossAndGradient loss_and_gradient(const ClassifierModel& model, const Eigen::MatrixXd& inputs,
                                  const Eigen::RowVectorXd& targets) {
  if (inputs.cols() != targets.size() || targets.size() == 0) {
    fail(ErrorCode::kInvalidArgument, "inputs and targets must be non-empty and aligned");
  }
  if (inputs.rows() != static_cast<Eigen::Index>(model.architecture().input_dim)) {
    fail(ErrorCode::kDimensionMismatch, "input dimension does not match the model");
  }
  ForwardPass pass = forward(model.layers(), inputs, 0.0, nullptr);
  return {mean_loss(pass.logits, targets), backward(model.layers(), pass, targets)};
}

double gradient_check(const ClassifierModel& model, std::span<const double> input, double target, double epsilon) {
  Eigen::MatrixXd x = Eigen::Map<const Eigen::VectorXd>(input.data(), static_cast<Eigen::Index>(input.size()));
  Eigen::RowVectorXd y(1);
  y[0] = target;
  const auto analytic = loss_and_gradient(model, x, y).gradient;

  ClassifierModel probe = model;
  auto loss_at = [&] { return mean_loss(probe.logits(x), y); };
  double worst = 0.0;
  auto compare = [&](double& parameter, double grad) {
    const double saved = parameter;
    parameter = saved + epsilon;
    const double up = loss_at();
    parameter = saved - epsilon;
    const double down = loss_at();
    parameter = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double scale = std::max({std::abs(grad), std::abs(numeric), 1e-6});
    worst = std::max(worst, std::abs(grad - numeric) / scale);
  };
  auto& layers = probe.mutable_layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (Eigen::Index i = 0; i < layers[l].weights.size(); ++i) {
      compare(layers[l].weights.data()[i], analytic[l].weights.data()[i]);
    }
    for (Eigen::Index i = 0; i < layers[l].bias.size(); ++i) compare(layers[l].bias[i], analytic[l].bias[i]);
  }
  return worst;
}

TrainingReport train(std::span<const LabeledExample> examples, const NetworkArchitecture& architecture,
                     const TrainingConfig& config) {
  architecture.validate();
  config.validate();
  if (examples.empty()) fail(ErrorCode::kPrecondition, "no training examples");
  const bool has_event = std::any_of(examples.begin(), examples.end(),
                                     [](const LabeledExample& e) { return e.label == MessageClass::kEvent; });
  const bool has_other = std::any_of(examples.begin(), examples.end(),
                                     [](const LabeledExample& e) { return e.label == MessageClass::kNotEvent; });
  if (!has_event || !has_other) fail(ErrorCode::kPrecondition, "single-class training data");

  const std::size_t dim = architecture.input_dim;
  const Eigen::MatrixXd all_x = to_matrix(examples, dim);

  std::mt19937_64 rng(derive_seed(config.seed, "classifier.shuffle"));
  std::vector<int> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t n_val = 0;
  if (config.validation_fraction > 0.0) {
    n_val = std::max<std::size_t>(1, static_cast<std::size_t>(
                                         std::lround(config.validation_fraction * static_cast<double>(examples.size()))));
    if (n_val >= examples.size()) fail(ErrorCode::kPrecondition, "too few examples for a validation slice");
  }
  std::vector<int> train_idx(order.begin(), order.end() - static_cast<std::ptrdiff_t>(n_val));
  std::vector<int> val_idx(order.end() - static_cast<std::ptrdiff_t>(n_val), order.end());

  auto targets_of = [&](const std::vector<int>& idx) {
    Eigen::RowVectorXd y(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      y[static_cast<Eigen::Index>(i)] = examples[static_cast<std::size_t>(idx[i])].label == MessageClass::kEvent;
    }
    return y;
  };
  const Eigen::MatrixXd train_x = all_x(Eigen::all, train_idx);
  const Eigen::RowVectorXd train_y = targets_of(train_idx);
  const Eigen::MatrixXd val_x = all_x(Eigen::all, val_idx);
  const Eigen::RowVectorXd val_y = targets_of(val_idx);

  ClassifierModel model = ClassifierModel::initialize(architecture, derive_seed(config.seed, "classifier.init"));
  std::vector<DenseLayer> velocity;
  for (const auto& layer : model.layers()) {
    velocity.push_back({Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()),
                        Eigen::VectorXd::Zero(layer.bias.size())});
  }

  TrainingReport report{model, {}, {}};
  double best_accuracy = -1.0;
  std::size_t best_epoch = 0;
  std::vector<DenseLayer> best_layers = model.layers();
  std::vector<int> batch_order(train_idx.size());
  std::iota(batch_order.begin(), batch_order.end(), 0);

  std::size_t epoch = 0;
  while (epoch < config.max_epochs) {
    ++epoch;
    std::shuffle(batch_order.begin(), batch_order.end(), rng);
    for (std::size_t start = 0; start < batch_order.size(); start += config.batch_size) {
      const std::size_t end = std::min(batch_order.size(), start + config.batch_size);
      std::vector<int> cols(batch_order.begin() + static_cast<std::ptrdiff_t>(start),
                            batch_order.begin() + static_cast<std::ptrdiff_t>(end));
      const Eigen::MatrixXd bx = train_x(Eigen::all, cols);
      const Eigen::RowVectorXd by = train_y(Eigen::all, cols);
      const ForwardPass pass = forward(model.layers(), bx, architecture.dropout_rate, &rng);
      const auto grad = backward(model.layers(), pass, by);
      auto& layers = model.mutable_layers();
      for (std::size_t l = 0; l < layers.size(); ++l) {
        velocity[l].weights = config.momentum * velocity[l].weights - config.learning_rate * grad[l].weights;
        velocity[l].bias = config.momentum * velocity[l].bias - config.learning_rate * grad[l].bias;
        layers[l].weights += velocity[l].weights;
        layers[l].bias += velocity[l].bias;
      }
    }

    report.train_loss.push_back(mean_loss(model.logits(train_x), train_y));
    const double val_accuracy = n_val > 0 ? accuracy(model, val_x, val_y) : accuracy(model, train_x, train_y);
    report.validation_accuracy.push_back(val_accuracy);
    if (val_accuracy > best_accuracy) {
      best_accuracy = val_accuracy;
      best_epoch = epoch;
      best_layers = model.layers();
    } else if (epoch - best_epoch >= config.patience) {
      break;
    }
  }

  model.mutable_layers() = std::move(best_layers);
  model.set_metadata({epoch, best_accuracy, config.seed});
  report.model = std::move(model);
  return report;
}

BinaryMetrics binary_metrics(std::span<const MessageClass> predicted, std::span<const MessageClass> truth) {
  if (predicted.size() != truth.size()) fail(ErrorCode::kInvalidArgument, "prediction/truth length mismatch");
  if (truth.empty()) fail(ErrorCode::kPrecondition, "empty test set");
  BinaryMetrics m;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool p = predicted[i] == MessageClass::kEvent;
    const bool t = truth[i] == MessageClass::kEvent;
    if (p && t) ++m.true_positive;
    else if (p) ++m.false_positive;
    else if (t) ++m.false_negative;
    else ++m.true_negative;
  }
  const auto ratio = [](std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / b; };
  m.accuracy = ratio(m.true_positive + m.true_negative, truth.size());
  m.precision = ratio(m.true_positive, m.true_positive + m.false_positive);
  m.recall = ratio(m.true_positive, m.true_positive + m.false_negative);
  return m;
}

BinaryMetrics evaluate_classifier(const ClassifierModel& model, std::span<const LabeledExample> test) {
  if (test.empty()) fail(ErrorCode::kPrecondition, "empty test set");
  std::vector<MessageClass> predicted, truth;
  for (const auto& example : test) {
    predicted.push_back(model.predict(example.features).label);
    truth.push_back(example.label);
  }
  return binary_metrics(predicted, truth);
}

}  // namespace newsdet
