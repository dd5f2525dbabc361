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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "newsdet/classifier.hpp"
#include "newsdet/embedding.hpp"
#include "temp_dir.hpp"

namespace newsdet::testing {

/// Standard normal components.
inline FeatureVector gaussian_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(dim);
  for (auto& x : v) x = n(rng);
  return FeatureVector(std::move(v));
}

/// Mixture stream: points near a handful of random centres, with the odd
/// exact repeat and zero vector so duplicate and zero branches are exercised.
inline std::vector<FeatureVector> clustered_stream(std::uint64_t seed, std::size_t n, std::size_t dim,
                                                   std::size_t centres = 8, double spread = 0.35) {
  std::mt19937_64 rng(seed);
  std::vector<FeatureVector> c;
  for (std::size_t i = 0; i < centres; ++i) c.push_back(gaussian_vector(rng, dim));
  std::uniform_int_distribution<std::size_t> pick(0, centres - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, spread);
  std::vector<FeatureVector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = u(rng);
    if (r < 0.03 && !out.empty()) {
      std::uniform_int_distribution<std::size_t> prev(0, out.size() - 1);
      out.push_back(out[prev(rng)]);
      continue;
    }
    if (r < 0.04) {
      out.push_back(FeatureVector::zeros(dim));
      continue;
    }
    const auto& centre = c[pick(rng)].values();
    std::vector<double> v(dim);
    for (std::size_t k = 0; k < dim; ++k) v[k] = centre[k] + noise(rng);
    out.push_back(FeatureVector(std::move(v)));
  }
  return out;
}

/// Two well separated 2-D Gaussian blobs, `n` points in total, classes alternating.
inline std::vector<LabeledExample> two_blobs(std::uint64_t seed, std::size_t n, double separation = 4.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<LabeledExample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool event = i % 2 == 0;
    const double c = event ? separation / 2 : -separation / 2;
    out.push_back({FeatureVector({c + g(rng), c + g(rng)}),
                   event ? MessageClass::kEvent : MessageClass::kNotEvent});
  }
  return out;
}

}  // namespace newsdet::testing
