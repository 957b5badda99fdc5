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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "howsumm/common.hpp"
#include "howsumm/numcore/array.hpp"

namespace howsumm::numcore {

template <class T>
using GradMap = std::map<std::string, Array<T>>;

// Named trainable arrays with their Adam moment accumulators.
template <class T>
class ParamStore {
 public:
  struct Entry {
    Array<T> value;
    Array<T> m;
    Array<T> v;
  };

  Array<T>& add(const std::string& name, Array<T> value) {
    if (entries_.count(name)) throw Error("numcore", "duplicate parameter '" + name + "'");
    const Shape shape = value.shape();
    auto& e = entries_[name];
    e.value = std::move(value);
    e.m = Array<T>(shape);
    e.v = Array<T>(shape);
    return e.value;
  }

  // Uniform(-scale, scale) draws, consumed in call order.
  Array<T>& add_uniform(const std::string& name, const Shape& shape, Rng& rng, double scale) {
    Array<T> a(shape);
    for (auto& x : a.storage()) x = static_cast<T>(rng.uniform(-scale, scale));
    return add(name, std::move(a));
  }

  Array<T>& add_zeros(const std::string& name, const Shape& shape) { return add(name, Array<T>(shape)); }

  bool contains(const std::string& name) const { return entries_.count(name) != 0; }

  const Array<T>& value(const std::string& name) const { return entry(name).value; }
  Array<T>& value(const std::string& name) { return entry(name).value; }

  const Entry& entry(const std::string& name) const {
    const auto it = entries_.find(name);
    if (it == entries_.end()) throw Error("numcore", "unknown parameter '" + name + "'");
    return it->second;
  }
  Entry& entry(const std::string& name) {
    const auto it = entries_.find(name);
    if (it == entries_.end()) throw Error("numcore", "unknown parameter '" + name + "'");
    return it->second;
  }

  const std::map<std::string, Entry>& entries() const { return entries_; }
  std::map<std::string, Entry>& entries() { return entries_; }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [n, e] : entries_) out.push_back(n);
    return out;
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& [name, e] : entries_) n += e.value.size();
    return n;
  }

  std::uint64_t step() const { return step_; }
  void set_step(std::uint64_t t) { step_ = t; }

  GradMap<T> zero_grads() const {
    GradMap<T> g;
    for (const auto& [n, e] : entries_) g.emplace(n, Array<T>(e.value.shape()));
    return g;
  }

  template <class U>
  ParamStore<U> cast() const {
    ParamStore<U> out;
    for (const auto& [n, e] : entries_) {
      auto& d = out.entries()[n];
      d.value = e.value.template cast<U>();
      d.m = e.m.template cast<U>();
      d.v = e.v.template cast<U>();
    }
    out.set_step(step_);
    return out;
  }

 private:
  std::map<std::string, Entry> entries_;
  std::uint64_t step_ = 0;
};

}  // namespace howsumm::numcore
