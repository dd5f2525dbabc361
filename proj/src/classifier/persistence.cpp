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

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "newsdet/classifier.hpp"
#include "newsdet/error.hpp"

// Model container, little-endian throughout:
//   magic "NDCLSF01" | u32 format version
//   u64 input_dim | u64 hidden count | u64 widths... | f64 dropout | f64 threshold
//   u64 epochs_run | f64 validation_accuracy | u64 seed
//   per layer: u64 rows | u64 cols | f64 weights (row-major) | f64 bias[rows]

namespace newsdet {
namespace {

constexpr std::array<char, 8> kMagic{'N', 'D', 'C', 'L', 'S', 'F', '0', '1'};
constexpr std::uint32_t kFormatVersion = 1;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void u32(std::uint32_t v) { bytes(v, 4); }
  void u64(std::uint64_t v) { bytes(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

 private:
  void bytes(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::ostream& out_;
};

class Reader {
 public:
  Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  std::uint32_t u32() { return static_cast<std::uint32_t>(bytes(4)); }
  std::uint64_t u64() { return bytes(8); }
  double f64() { return std::bit_cast<double>(u64()); }

  std::size_t count(std::uint64_t limit, const char* what) {
    const std::uint64_t v = u64();
    if (v > limit) fail(ErrorCode::kParse, source_ + ": implausible " + what + " " + std::to_string(v));
    return static_cast<std::size_t>(v);
  }

 private:
  std::uint64_t bytes(int n) {
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      const int c = in_.get();
      if (c == std::char_traits<char>::eof()) fail(ErrorCode::kParse, source_ + ": truncated model file");
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return v;
  }
  std::istream& in_;
  std::string source_;
};

constexpr std::uint64_t kMaxWidth = 1u << 24;

}  // namespace

void save_model(const ClassifierModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write model file " + path.string());
  out.write(kMagic.data(), kMagic.size());
  Writer w(out);
  const auto& arch = model.architecture();
  w.u32(kFormatVersion);
  w.u64(arch.input_dim);
  w.u64(arch.hidden_layers.size());
  for (std::size_t width : arch.hidden_layers) w.u64(width);
  w.f64(arch.dropout_rate);
  w.f64(arch.decision_threshold);
  w.u64(model.metadata().epochs_run);
  w.f64(model.metadata().validation_accuracy);
  w.u64(model.metadata().seed);
  for (const auto& layer : model.layers()) {
    w.u64(static_cast<std::uint64_t>(layer.weights.rows()));
    w.u64(static_cast<std::uint64_t>(layer.weights.cols()));
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) w.f64(layer.weights(r, c));
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) w.f64(layer.bias[r]);
  }
  if (!out) fail(ErrorCode::kIo, "failed writing model file " + path.string());
}

ClassifierModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot read model file " + path.string());
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) fail(ErrorCode::kParse, path.string() + " is not a newsdet model file");
  Reader r(in, path.string());
  if (const auto version = r.u32(); version != kFormatVersion) {
    fail(ErrorCode::kParse, path.string() + ": unsupported model format version " + std::to_string(version));
  }
  NetworkArchitecture arch;
  arch.input_dim = r.count(kMaxWidth, "input dimension");
  arch.hidden_layers.resize(r.count(64, "hidden layer count"));
  for (auto& width : arch.hidden_layers) width = r.count(kMaxWidth, "layer width");
  arch.dropout_rate = r.f64();
  arch.decision_threshold = r.f64();
  TrainingMetadata meta;
  meta.epochs_run = static_cast<std::size_t>(r.u64());
  meta.validation_accuracy = r.f64();
  meta.seed = r.u64();
  arch.validate();

  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l <= arch.hidden_layers.size(); ++l) {
    const auto rows = static_cast<Eigen::Index>(r.count(kMaxWidth, "row count"));
    const auto cols = static_cast<Eigen::Index>(r.count(kMaxWidth, "column count"));
    DenseLayer layer{Eigen::MatrixXd(rows, cols), Eigen::VectorXd(rows)};
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) layer.weights(i, j) = r.f64();
    }
    for (Eigen::Index i = 0; i < rows; ++i) layer.bias[i] = r.f64();
    layers.push_back(std::move(layer));
  }
  return ClassifierModel(std::move(arch), std::move(layers), meta);
}

}  // namespace newsdet
