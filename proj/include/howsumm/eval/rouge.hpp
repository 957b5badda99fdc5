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
#include <vector>

#include "howsumm/common.hpp"

namespace howsumm::eval {

struct PRF {
  double p = 0.0;
  double r = 0.0;
  double f = 0.0;
};

// Longest common subsequence length, O(|a| |b|) time, O(|b|) memory.
inline std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline double f_beta(double p, double r, double beta) {
  if (p == 0.0 && r == 0.0) return 0.0;
  const double b2 = beta * beta;
  return (1.0 + b2) * p * r / (r + b2 * p);
}

// Summary-level ROUGE-L over whole token sequences.
inline PRF rouge_l(const Tokens& hyp, const Tokens& ref, double beta = 1.0) {
  if (ref.empty()) throw Error("eval", "empty reference");
  const auto lcs = static_cast<double>(lcs_length(hyp, ref));
  PRF s;
  s.p = hyp.empty() ? 0.0 : lcs / static_cast<double>(hyp.size());
  s.r = lcs / static_cast<double>(ref.size());
  s.f = f_beta(s.p, s.r, beta);
  return s;
}

}  // namespace howsumm::eval
