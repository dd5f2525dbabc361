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

#include "newsdet/clustering.hpp"
#include "newsdet/error.hpp"

namespace newsdet {

Window::Window(std::size_t dimension, std::size_t capacity)
    : dimension_(dimension),
      capacity_(capacity),
      columns_(static_cast<Eigen::Index>(dimension), static_cast<Eigen::Index>(capacity)),
      entries_(capacity),
      zero_(capacity, 0) {
  if (dimension == 0 || capacity == 0) fail(ErrorCode::kInvalidArgument, "window needs a positive dimension and capacity");
}

std::optional<Window::Neighbor> Window::nearest(const FeatureVector& query) const {
  return nearest(std::span<const FeatureVector>(&query, 1)).front();
}

std::vector<std::optional<Window::Neighbor>> Window::nearest(std::span<const FeatureVector> queries) const {
  std::vector<std::optional<Neighbor>> result(queries.size());
  if (size_ == 0 || queries.empty()) return result;

  const auto k = static_cast<Eigen::Index>(queries.size());
  Eigen::MatrixXd q(static_cast<Eigen::Index>(dimension_), k);
  std::vector<char> query_zero(queries.size(), 0);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto values = queries[static_cast<std::size_t>(j)].values();
    if (values.size() != dimension_) {
      fail(ErrorCode::kDimensionMismatch, "query dimension " + std::to_string(values.size()) +
                                              " does not match window dimension " + std::to_string(dimension_));
    }
    q.col(j) = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(dimension_));
    const double norm = q.col(j).norm();
    if (norm == 0.0) {
      query_zero[static_cast<std::size_t>(j)] = 1;
    } else {
      q.col(j) /= norm;
    }
  }

  std::vector<Neighbor> best(queries.size());
  // Occupied slots form at most two contiguous runs of the ring, oldest first.
  const std::size_t first_len = std::min(size_, capacity_ - head_);
  const std::pair<std::size_t, std::size_t> runs[2] = {{head_, first_len}, {0, size_ - first_len}};
  std::size_t position = 0;
  for (const auto& [start, len] : runs) {
    if (len == 0) continue;
    const Eigen::MatrixXd dots =
        columns_.middleCols(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(len)).transpose() * q;
    for (Eigen::Index j = 0; j < k; ++j) {
      auto& b = best[static_cast<std::size_t>(j)];
      const bool qz = query_zero[static_cast<std::size_t>(j)] != 0;
      for (std::size_t r = 0; r < len; ++r) {
        const double d = (qz || zero_[start + r] != 0)
                             ? 2.0
                             : std::clamp(1.0 - dots(static_cast<Eigen::Index>(r), j), 0.0, 2.0);
        if ((position == 0 && r == 0) || d < b.distance) {
          b.distance = d;
          b.position = position + r;
        }
      }
    }
    position += len;
  }
  for (std::size_t j = 0; j < queries.size(); ++j) {
    best[j].thread_id = entry(best[j].position).thread_id;
    result[j] = best[j];
  }
  return result;
}

void Window::push(const FeatureVector& vector, std::string message_id, std::size_t thread_id) {
  if (vector.dimension() != dimension_) {
    fail(ErrorCode::kDimensionMismatch, "vector dimension " + std::to_string(vector.dimension()) +
                                            " does not match window dimension " + std::to_string(dimension_));
  }
  if (size_ == capacity_) evict_oldest(1);
  const std::size_t s = slot(size_);
  auto col = columns_.col(static_cast<Eigen::Index>(s));
  col = Eigen::Map<const Eigen::VectorXd>(vector.values().data(), static_cast<Eigen::Index>(dimension_));
  const double norm = col.norm();
  zero_[s] = norm == 0.0 ? 1 : 0;
  if (norm != 0.0) col /= norm;
  entries_[s] = Entry{std::move(message_id), thread_id, next_sequence_++};
  ++size_;
}

void Window::evict_oldest(std::size_t count) {
  count = std::min(count, size_);
  head_ = (head_ + count) % capacity_;
  size_ -= count;
}

const Window::Entry& Window::entry(std::size_t position) const {
  if (position >= size_) fail(ErrorCode::kInvalidArgument, "window position out of range");
  return entries_[slot(position)];
}

}  // namespace newsdet
