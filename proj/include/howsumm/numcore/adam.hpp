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

#include <cmath>
#include <string>

#include "howsumm/common.hpp"
#include "howsumm/numcore/param_store.hpp"

namespace howsumm::numcore {

struct AdamHyper {
  double lr = 4e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void validate() const {
    if (!(lr > 0.0)) throw Error("numcore", "adam lr must be > 0");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
      throw Error("numcore", "adam betas must lie in [0, 1)");
    if (!(eps > 0.0)) throw Error("numcore", "adam eps must be > 0");
  }
};

// One bias-corrected Adam update over every parameter. Parameters absent
// from `grads` are treated as having zero gradient.
template <class T>
void adam_step(ParamStore<T>& store, const GradMap<T>& grads, const AdamHyper& hyper) {
  hyper.validate();
  for (const auto& [name, g] : grads) {
    if (!store.contains(name)) throw Error("numcore", "gradient for unknown parameter '" + name + "'");
    if (g.shape() != store.value(name).shape())
      throw Error("numcore", "gradient shape " + shape_string(g.shape()) + " does not match parameter '" + name +
                                 "' " + shape_string(store.value(name).shape()));
  }
  const std::uint64_t t = store.step() + 1;
  store.set_step(t);
  const double c1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(t));
  for (auto& [name, e] : store.entries()) {
    const auto it = grads.find(name);
    const Array<T>* g = it == grads.end() ? nullptr : &it->second;
    for (std::size_t i = 0; i < e.value.size(); ++i) {
      const double gi = g ? static_cast<double>((*g)[i]) : 0.0;
      const double m = hyper.beta1 * static_cast<double>(e.m[i]) + (1.0 - hyper.beta1) * gi;
      const double v = hyper.beta2 * static_cast<double>(e.v[i]) + (1.0 - hyper.beta2) * gi * gi;
      e.m[i] = static_cast<T>(m);
      e.v[i] = static_cast<T>(v);
      const double m_hat = m / c1;
      const double v_hat = v / c2;
      e.value[i] = static_cast<T>(static_cast<double>(e.value[i]) - hyper.lr * m_hat / (std::sqrt(v_hat) + hyper.eps));
    }
  }
}

}  // namespace howsumm::numcore
