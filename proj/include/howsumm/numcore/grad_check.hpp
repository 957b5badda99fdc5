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
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "howsumm/common.hpp"
#include "howsumm/numcore/param_store.hpp"
#include "howsumm/numcore/tape.hpp"

namespace howsumm::numcore {

struct GradCheckOptions {
  double eps = 1e-4;
  // 0 checks every coordinate; otherwise a seeded sample of this many
  // coordinates per parameter.
  std::size_t max_coords_per_param = 0;
  std::uint64_t seed = 1;
  // Denominator floor: rel = |a - n| / max(|a|, |n|, abs_floor).
  double abs_floor = 1e-6;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t checked = 0;
};

// Builds the loss on the given tape from the parameters bound to it.
template <class T>
using LossBuilder = std::function<Var(Tape<T>&)>;

template <class T>
T evaluate_loss(const LossBuilder<T>& build, const ParamStore<T>& params) {
  Tape<T> tape(&params, false);
  const T loss = tape.scalar(build(tape));
  if (!std::isfinite(static_cast<double>(loss))) throw Error("numcore", "grad_check: non-finite loss");
  return loss;
}

// Central differences against the supplied analytic gradients.
template <class T>
GradCheckResult grad_check(const LossBuilder<T>& build, const GradMap<T>& analytic, ParamStore<T>& params,
                           const GradCheckOptions& opt = {}) {
  if (!(opt.eps > 0.0)) throw Error("numcore", "grad_check eps must be > 0");
  evaluate_loss(build, params);
  Rng rng(opt.seed);
  GradCheckResult res;
  for (auto& [name, entry] : params.entries()) {
    auto& value = entry.value;
    const auto git = analytic.find(name);
    std::vector<std::size_t> coords(value.size());
    std::iota(coords.begin(), coords.end(), std::size_t{0});
    if (opt.max_coords_per_param != 0 && coords.size() > opt.max_coords_per_param) {
      rng.shuffle(coords.begin(), coords.end());
      coords.resize(opt.max_coords_per_param);
      std::sort(coords.begin(), coords.end());
    }
    for (const auto i : coords) {
      const T saved = value[i];
      value[i] = static_cast<T>(static_cast<double>(saved) + opt.eps);
      const double plus = static_cast<double>(evaluate_loss(build, params));
      value[i] = static_cast<T>(static_cast<double>(saved) - opt.eps);
      const double minus = static_cast<double>(evaluate_loss(build, params));
      value[i] = saved;
      const double numeric = (plus - minus) / (2.0 * opt.eps);
      const double a = git == analytic.end() ? 0.0 : static_cast<double>(git->second[i]);
      const double denom = std::max({std::abs(a), std::abs(numeric), opt.abs_floor});
      const double rel = std::abs(a - numeric) / denom;
      ++res.checked;
      if (rel > res.max_rel_error || res.checked == 1) {
        res.max_rel_error = rel;
        res.worst_param = name;
        res.worst_index = i;
        res.analytic = a;
        res.numeric = numeric;
      }
    }
  }
  return res;
}

// Runs backward() once for the analytic side, then compares.
template <class T>
GradCheckResult grad_check(const LossBuilder<T>& build, ParamStore<T>& params, const GradCheckOptions& opt = {}) {
  GradMap<T> analytic;
  {
    Tape<T> tape(&params, true);
    const Var loss = build(tape);
    if (!std::isfinite(static_cast<double>(tape.scalar(loss)))) throw Error("numcore", "grad_check: non-finite loss");
    analytic = tape.backward(loss);
  }
  return grad_check(build, analytic, params, opt);
}

}  // namespace howsumm::numcore
