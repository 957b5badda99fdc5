// Copyright 2026 The howsumm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "howsumm/common.hpp"

namespace howsumm::numcore {

using Shape = std::vector<std::size_t>;

inline std::string shape_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) s += (i ? "x" : "") + std::to_string(shape[i]);
  return s + "]";
}

// Dense row-major array. Rank 1 holds vectors (scalars are shape [1]);
// rank 2 holds matrices.
template <class T>
class Array {
 public:
  Array() = default;

  explicit Array(Shape shape, T fill = T(0)) : shape_(std::move(shape)) {
    if (shape_.empty()) throw Error("numcore", "array shape must have at least one dimension");
    for (const auto d : shape_)
      if (d < 1) throw Error("numcore", "array dimensions must be >= 1, got " + shape_string(shape_));
    data_.assign(count(shape_), fill);
  }

  Array(Shape shape, std::vector<T> data) : shape_(std::move(shape)), data_(std::move(data)) {
    if (shape_.empty()) throw Error("numcore", "array shape must have at least one dimension");
    for (const auto d : shape_)
      if (d < 1) throw Error("numcore", "array dimensions must be >= 1, got " + shape_string(shape_));
    if (data_.size() != count(shape_))
      throw Error("numcore", "data size " + std::to_string(data_.size()) + " does not match shape " +
                                 shape_string(shape_));
  }

  static Array vector(std::initializer_list<T> values) {
    return Array({values.size()}, std::vector<T>(values));
  }
  static Array vector(std::vector<T> values) {
    const auto n = values.size();
    return Array({n}, std::move(values));
  }
  static Array zeros(std::size_t n) { return Array({n}); }
  static Array scalar(T v) { return Array({1}, std::vector<T>{v}); }

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  std::size_t rows() const { return shape_.empty() ? 0 : shape_[0]; }
  std::size_t cols() const { return shape_.size() < 2 ? 1 : shape_[1]; }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }
  T& at(std::size_t r, std::size_t c) { return data_[r * shape_[1] + c]; }
  const T& at(std::size_t r, std::size_t c) const { return data_[r * shape_[1] + c]; }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }
  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  template <class U>
  Array<U> cast() const {
    return Array<U>(shape_, std::vector<U>(data_.begin(), data_.end()));
  }

  bool operator==(const Array& other) const = default;

  static std::size_t count(const Shape& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
  }

 private:
  Shape shape_;
  std::vector<T> data_;
};

}  // namespace howsumm::numcore
