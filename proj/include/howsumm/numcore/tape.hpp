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
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "howsumm/common.hpp"
#include "howsumm/numcore/array.hpp"
#include "howsumm/numcore/param_store.hpp"

namespace howsumm::numcore {

// Handle to a node recorded on a Tape.
struct Var {
  std::size_t id = std::numeric_limits<std::size_t>::max();
};

// Records array operations in execution order for reverse-mode
// differentiation. Nodes are appended after their inputs, so walking the
// record backwards visits every node after all of its consumers.
//
// With recording disabled the tape only evaluates values; that mode is used
// for decoding.
template <class T>
class Tape {
 public:
  explicit Tape(const ParamStore<T>* store = nullptr, bool record = true) : store_(store), record_(record) {}

  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return record_; }
  std::size_t size() const { return nodes_.size(); }
  const ParamStore<T>* store() const { return store_; }

  const Array<T>& value(Var v) const {
    const auto& n = nodes_.at(v.id);
    return n.ref ? *n.ref : n.value;
  }
  T scalar(Var v) const { return value(v)[0]; }

  Var constant(Array<T> a) { return push(std::move(a), false); }

  // Leaf for a store parameter; repeated calls share one node so the
  // gradient contributions accumulate.
  Var param(const std::string& name) {
    if (!store_) throw Error("numcore", "tape has no parameter store");
    if (const auto it = param_nodes_.find(name); it != param_nodes_.end()) return it->second;
    Node n;
    n.ref = &store_->value(name);
    n.param = name;
    n.needs_grad = record_;
    nodes_.push_back(std::move(n));
    const Var v{nodes_.size() - 1};
    param_nodes_.emplace(name, v);
    return v;
  }

  // W[m x n] * x[n]
  Var matvec(Var w, Var x) {
    const auto& W = value(w);
    const auto& X = value(x);
    if (W.rank() != 2 || X.rank() != 1 || W.cols() != X.size())
      throw Error("numcore", "matvec shape mismatch " + shape_string(W.shape()) + " * " + shape_string(X.shape()));
    const std::size_t m = W.rows(), n = W.cols();
    Array<T> out({m});
    const T* wd = W.storage().data();
    const T* xd = X.storage().data();
    for (std::size_t i = 0; i < m; ++i) {
      T acc = 0;
      const T* row = wd + i * n;
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * xd[j];
      out[i] = acc;
    }
    return op(std::move(out), {w, x}, [w, x, m, n](Tape& t, std::size_t self) {
      const auto& g = t.nodes_[self].grad;
      if (t.needs(w)) {
        auto& gw = t.grad(w);
        const auto& X = t.value(x);
        for (std::size_t i = 0; i < m; ++i) {
          const T gi = g[i];
          if (gi == T(0)) continue;
          T* row = gw.storage().data() + i * n;
          for (std::size_t j = 0; j < n; ++j) row[j] += gi * X[j];
        }
      }
      if (t.needs(x)) {
        auto& gx = t.grad(x);
        const auto& W = t.value(w);
        for (std::size_t i = 0; i < m; ++i) {
          const T gi = g[i];
          if (gi == T(0)) continue;
          const T* row = W.storage().data() + i * n;
          for (std::size_t j = 0; j < n; ++j) gx[j] += gi * row[j];
        }
      }
    });
  }

  Var add(Var a, Var b) {
    same_size(a, b, "add");
    Array<T> out = value(a);
    const auto& B = value(b);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += B[i];
    return op(std::move(out), {a, b}, [a, b](Tape& t, std::size_t self) {
      t.accumulate(a, t.nodes_[self].grad);
      t.accumulate(b, t.nodes_[self].grad);
    });
  }

  Var add(Var a, Var b, Var c) { return add(add(a, b), c); }

  Var sub(Var a, Var b) {
    same_size(a, b, "sub");
    Array<T> out = value(a);
    const auto& B = value(b);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= B[i];
    return op(std::move(out), {a, b}, [a, b](Tape& t, std::size_t self) {
      const auto& g = t.nodes_[self].grad;
      t.accumulate(a, g);
      if (t.needs(b)) {
        auto& gb = t.grad(b);
        for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
      }
    });
  }

  // Elementwise product.
  Var mul(Var a, Var b) {
    same_size(a, b, "mul");
    Array<T> out = value(a);
    const auto& B = value(b);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= B[i];
    return op(std::move(out), {a, b}, [a, b](Tape& t, std::size_t self) {
      const auto& g = t.nodes_[self].grad;
      if (t.needs(a)) {
        auto& ga = t.grad(a);
        const auto& B = t.value(b);
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * B[i];
      }
      if (t.needs(b)) {
        auto& gb = t.grad(b);
        const auto& A = t.value(a);
        for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * A[i];
      }
    });
  }

  Var scale(Var a, T c) {
    Array<T> out = value(a);
    for (auto& x : out.storage()) x *= c;
    return op(std::move(out), {a}, [a, c](Tape& t, std::size_t self) {
      const auto& g = t.nodes_[self].grad;
      if (!t.needs(a)) return;
      auto& ga = t.grad(a);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += c * g[i];
    });
  }

  // 1 - a
  Var one_minus(Var a) {
    Array<T> out = value(a);
    for (auto& x : out.storage()) x = T(1) - x;
    return op(std::move(out), {a}, [a](Tape& t, std::size_t self) {
      const auto& g = t.nodes_[self].grad;
      if (!t.needs(a)) return;
      auto& ga = t.grad(a);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] -= g[i];
    });
  }

  Var sigmoid(Var a) {
    Array<T> out = value(a);
    for (auto& x : out.storage()) x = x >= T(0) ? T(1) / (T(1) + std::exp(-x)) : std::exp(x) / (T(1) + std::exp(x));
    return op(std::move(out), {a}, [a](Tape& t, std::size_t self) {
      const auto& n = t.nodes_[self];
      if (!t.needs(a)) return;
      auto& ga = t.grad(a);
      for (std::size_t i = 0; i < n.grad.size(); ++i) ga[i] += n.grad[i] * n.value[i] * (T(1) - n.value[i]);
    });
  }

  Var tanh(Var a) {
    Array<T> out = value(a);
    for (auto& x : out.storage()) x = std::tanh(x);
    return op(std::move(out), {a}, [a](Tape& t, std::size_t self) {
      const auto& n = t.nodes_[self];
      if (!t.needs(a)) return;
      auto& ga = t.grad(a);
      for (std::size_t i = 0; i < n.grad.size(); ++i) ga[i] += n.grad[i] * (T(1) - n.value[i] * n.value[i]);
    });
  }

  Var concat(Var a, Var b) {
    const auto& A = value(a);
    const auto& B = value(b);
    std::vector<T> d(A.storage());
    d.insert(d.end(), B.storage().begin(), B.storage().end());
    const std::size_t na = A.size();
    return op(Array<T>::vector(std::move(d)), {a, b}, [a, b, na](Tape& t, std::size_t self) {
      const auto& g = t.nodes_[self].grad;
      if (t.needs(a)) {
        auto& ga = t.grad(a);
        for (std::size_t i = 0; i < na; ++i) ga[i] += g[i];
      }
      if (t.needs(b)) {
        auto& gb = t.grad(b);
        for (std::size_t i = na; i < g.size(); ++i) gb[i - na] += g[i];
      }
    });
  }

  // Row i of a matrix, as a vector (embedding lookup).
  Var row(Var m, std::size_t i) {
    const auto& M = value(m);
    if (M.rank() != 2 || i >= M.rows())
      throw Error("numcore", "row " + std::to_string(i) + " out of range for " + shape_string(M.shape()));
    const std::size_t n = M.cols();
    std::vector<T> d(M.storage().begin() + static_cast<std::ptrdiff_t>(i * n),
                     M.storage().begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
    return op(Array<T>::vector(std::move(d)), {m}, [m, i, n](Tape& t, std::size_t self) {
      const auto& g = t.nodes_[self].grad;
      if (!t.needs(m)) return;
      auto& gm = t.grad(m);
      for (std::size_t j = 0; j < n; ++j) gm[i * n + j] += g[j];
    });
  }

  // Inner product -> scalar.
  Var dot(Var a, Var b) {
    same_size(a, b, "dot");
    const auto& A = value(a);
    const auto& B = value(b);
    T acc = 0;
    for (std::size_t i = 0; i < A.size(); ++i) acc += A[i] * B[i];
    return op(Array<T>::scalar(acc), {a, b}, [a, b](Tape& t, std::size_t self) {
      const T g = t.nodes_[self].grad[0];
      if (t.needs(a)) {
        auto& ga = t.grad(a);
        const auto& B = t.value(b);
        for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g * B[i];
      }
      if (t.needs(b)) {
        auto& gb = t.grad(b);
        const auto& A = t.value(a);
        for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += g * A[i];
      }
    });
  }

  // Packs scalar nodes into one vector.
  Var stack(std::span<const Var> scalars) {
    if (scalars.empty()) throw Error("numcore", "stack of zero scalars");
    std::vector<T> d;
    d.reserve(scalars.size());
    for (const auto s : scalars) {
      if (value(s).size() != 1) throw Error("numcore", "stack expects scalar inputs");
      d.push_back(value(s)[0]);
    }
    std::vector<Var> in(scalars.begin(), scalars.end());
    return op(Array<T>::vector(std::move(d)), in, [in](Tape& t, std::size_t self) {
      const auto& g = t.nodes_[self].grad;
      for (std::size_t i = 0; i < in.size(); ++i)
        if (t.needs(in[i])) t.grad(in[i])[0] += g[i];
    });
  }

  Var softmax(Var a) {
    Array<T> out = softmax_values(value(a));
    return op(std::move(out), {a}, [a](Tape& t, std::size_t self) {
      const auto& n = t.nodes_[self];
      if (!t.needs(a)) return;
      T dotgy = 0;
      for (std::size_t i = 0; i < n.value.size(); ++i) dotgy += n.grad[i] * n.value[i];
      auto& ga = t.grad(a);
      for (std::size_t i = 0; i < n.value.size(); ++i) ga[i] += n.value[i] * (n.grad[i] - dotgy);
    });
  }

  // sum_i w[i] * items[i]
  Var weighted_sum(Var w, std::span<const Var> items) {
    const auto& W = value(w);
    if (items.empty() || W.size() != items.size())
      throw Error("numcore", "weighted_sum needs one weight per item");
    const std::size_t d = value(items[0]).size();
    Array<T> out({d});
    for (std::size_t k = 0; k < items.size(); ++k) {
      const auto& it = value(items[k]);
      if (it.size() != d) throw Error("numcore", "weighted_sum items differ in size");
      for (std::size_t i = 0; i < d; ++i) out[i] += W[k] * it[i];
    }
    std::vector<Var> in{w};
    in.insert(in.end(), items.begin(), items.end());
    return op(std::move(out), in, [in, d](Tape& t, std::size_t self) {
      const auto& g = t.nodes_[self].grad;
      const Var w = in[0];
      const auto& W = t.value(w);
      for (std::size_t k = 1; k < in.size(); ++k) {
        const auto& it = t.value(in[k]);
        if (t.needs(w)) {
          T acc = 0;
          for (std::size_t i = 0; i < d; ++i) acc += g[i] * it[i];
          t.grad(w)[k - 1] += acc;
        }
        if (t.needs(in[k])) {
          auto& gi = t.grad(in[k]);
          for (std::size_t i = 0; i < d; ++i) gi[i] += W[k - 1] * g[i];
        }
      }
    });
  }

  Var mean(std::span<const Var> items) {
    if (items.empty()) throw Error("numcore", "mean of zero items");
    const std::size_t d = value(items[0]).size();
    Array<T> out({d});
    const T inv = T(1) / static_cast<T>(items.size());
    for (const auto v : items) {
      const auto& a = value(v);
      if (a.size() != d) throw Error("numcore", "mean items differ in size");
      for (std::size_t i = 0; i < d; ++i) out[i] += a[i] * inv;
    }
    std::vector<Var> in(items.begin(), items.end());
    return op(std::move(out), in, [in, inv](Tape& t, std::size_t self) {
      const auto& g = t.nodes_[self].grad;
      for (const auto v : in) {
        if (!t.needs(v)) continue;
        auto& gv = t.grad(v);
        for (std::size_t i = 0; i < g.size(); ++i) gv[i] += inv * g[i];
      }
    });
  }

  // -log softmax(logits)[target]
  Var cross_entropy(Var logits, std::size_t target) {
    const auto& L = value(logits);
    if (target >= L.size())
      throw Error("numcore", "cross_entropy target " + std::to_string(target) + " out of range for " +
                                 std::to_string(L.size()) + " classes");
    Array<T> p = softmax_values(L);
    const T loss = -log_softmax_at(L, target);
    auto probs = std::make_shared<Array<T>>(std::move(p));
    return op(Array<T>::scalar(loss), {logits}, [logits, target, probs](Tape& t, std::size_t self) {
      if (!t.needs(logits)) return;
      const T g = t.nodes_[self].grad[0];
      auto& gl = t.grad(logits);
      for (std::size_t i = 0; i < gl.size(); ++i) gl[i] += g * ((*probs)[i] - (i == target ? T(1) : T(0)));
    });
  }

  // Reverse sweep from a scalar node; returns gradients for every store
  // parameter (zeros for those the loss does not reach).
  GradMap<T> backward(Var loss) {
    GradMap<T> out = store_ ? store_->zero_grads() : GradMap<T>{};
    accumulate_gradients(loss, out, T(1));
    return out;
  }

  // Adds weight * d(loss)/d(param) into `grads`.
  void accumulate_gradients(Var loss, GradMap<T>& grads, T weight) {
    if (!record_) throw Error("numcore", "backward on a non-recording tape");
    if (value(loss).size() != 1) throw Error("numcore", "backward requires a scalar loss");
    for (auto& n : nodes_) n.grad = Array<T>();
    grad(loss)[0] = T(1);
    for (std::size_t i = loss.id + 1; i-- > 0;) {
      auto& n = nodes_[i];
      if (n.grad.empty()) continue;
      if (n.back) n.back(*this, i);
    }
    for (const auto& [name, v] : param_nodes_) {
      const auto& n = nodes_[v.id];
      if (n.grad.empty()) continue;
      auto it = grads.find(name);
      if (it == grads.end()) it = grads.emplace(name, Array<T>(n.grad.shape())).first;
      auto& g = it->second;
      for (std::size_t k = 0; k < g.size(); ++k) g[k] += weight * n.grad[k];
    }
  }

  static Array<T> softmax_values(const Array<T>& a) {
    if (a.empty()) throw Error("numcore", "softmax of an empty vector");
    Array<T> out = a;
    T mx = out[0];
    for (const auto x : out.storage()) mx = std::max(mx, x);
    T sum = 0;
    for (auto& x : out.storage()) {
      x = std::exp(x - mx);
      sum += x;
    }
    for (auto& x : out.storage()) x /= sum;
    return out;
  }

  static T log_softmax_at(const Array<T>& a, std::size_t i) {
    T mx = a[0];
    for (const auto x : a.storage()) mx = std::max(mx, x);
    T sum = 0;
    for (const auto x : a.storage()) sum += std::exp(x - mx);
    return a[i] - mx - std::log(sum);
  }

 private:
  struct Node {
    Array<T> value;
    Array<T> grad;
    const Array<T>* ref = nullptr;
    std::string param;
    std::function<void(Tape&, std::size_t)> back;
    bool needs_grad = false;
  };

  Var push(Array<T> value, bool needs_grad) {
    Node n;
    n.value = std::move(value);
    n.needs_grad = needs_grad && record_;
    nodes_.push_back(std::move(n));
    return Var{nodes_.size() - 1};
  }

  template <class F>
  Var op(Array<T> value, std::initializer_list<Var> inputs, F&& back) {
    return op(std::move(value), std::span<const Var>(inputs.begin(), inputs.size()), std::forward<F>(back));
  }

  template <class F>
  Var op(Array<T> value, std::span<const Var> inputs, F&& back) {
    bool needs = false;
    if (record_)
      for (const auto v : inputs) needs = needs || nodes_[v.id].needs_grad;
    const Var out = push(std::move(value), needs);
    if (needs) nodes_.back().back = std::forward<F>(back);
    return out;
  }

  bool needs(Var v) const { return nodes_[v.id].needs_grad; }

  Array<T>& grad(Var v) {
    auto& n = nodes_[v.id];
    if (n.grad.empty()) n.grad = Array<T>(value(v).shape());
    return n.grad;
  }

  void accumulate(Var v, const Array<T>& g) {
    if (!needs(v)) return;
    auto& gv = grad(v);
    for (std::size_t i = 0; i < g.size(); ++i) gv[i] += g[i];
  }

  void same_size(Var a, Var b, const char* what) const {
    if (value(a).size() != value(b).size())
      throw Error("numcore", std::string(what) + " size mismatch " + shape_string(value(a).shape()) + " vs " +
                                 shape_string(value(b).shape()));
  }

  const ParamStore<T>* store_;
  bool record_;
  std::vector<Node> nodes_;
  std::unordered_map<std::string, Var> param_nodes_;
};

}  // namespace howsumm::numcore
