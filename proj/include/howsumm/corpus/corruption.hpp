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
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "howsumm/common.hpp"
#include "howsumm/corpus/vocabulary.hpp"

namespace howsumm::corpus {

// Simulated ASR noise: a target word error rate and the share of
// substitutions, deletions and insertions among the applied edits.
struct CorruptionSpec {
  double target_wer = 0.354;
  std::array<double, 3> sub_del_ins_mix = {0.6, 0.2, 0.2};
  std::uint64_t seed = 1;

  void validate() const {
    if (!(target_wer >= 0.0 && target_wer <= 1.0)) throw Error("corpus", "target_wer must lie in [0, 1]");
    double sum = 0.0;
    for (const double w : sub_del_ins_mix) {
      if (!(w >= 0.0)) throw Error("corpus", "edit mix weights must be non-negative");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw Error("corpus", "edit mix weights must sum to 1");
  }
};

// Word-level Levenshtein distance.
inline std::size_t edit_distance(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline double word_error_rate(const Tokens& hyp, const Tokens& ref) {
  if (ref.empty()) throw Error("corpus", "word_error_rate needs a non-empty reference");
  return static_cast<double>(edit_distance(hyp, ref)) / static_cast<double>(ref.size());
}

// Applies round(target_wer * |tokens|) edits. Substitutions and deletions hit
// distinct source positions; substitutes and insertions are drawn uniformly
// from the non-special vocabulary entries.
inline Tokens corrupt_to_wer(const Tokens& tokens, const CorruptionSpec& spec, const Vocabulary& vocab) {
  spec.validate();
  if (tokens.empty()) throw Error("corpus", "cannot corrupt an empty token sequence");
  const std::size_t n = tokens.size();
  const auto edits = static_cast<std::size_t>(std::llround(spec.target_wer * static_cast<double>(n)));
  if (edits == 0) return tokens;
  const Tokens pool = vocab.entries();
  if (pool.empty()) throw Error("corpus", "corruption needs a non-empty vocabulary");

  Rng rng(spec.seed);
  std::size_t n_sub = 0, n_del = 0, n_ins = 0;
  const double p_sub = spec.sub_del_ins_mix[0];
  const double p_del = spec.sub_del_ins_mix[1];
  for (std::size_t e = 0; e < edits; ++e) {
    const double u = rng.uniform01();
    if (u < p_sub) ++n_sub;
    else if (u < p_sub + p_del) ++n_del;
    else ++n_ins;
  }
  // Position-consuming edits cannot exceed the sequence length.
  while (n_sub + n_del > n) {
    if (n_del > 0) --n_del;
    else --n_sub;
    ++n_ins;
  }

  std::vector<std::size_t> positions(n);
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  rng.shuffle(positions.begin(), positions.end());
  enum Action : std::uint8_t { kKeep, kSub, kDel };
  std::vector<Action> action(n, kKeep);
  for (std::size_t i = 0; i < n_sub; ++i) action[positions[i]] = kSub;
  for (std::size_t i = n_sub; i < n_sub + n_del; ++i) action[positions[i]] = kDel;
  // insert_before[i] counts insertions placed ahead of source token i
  // (index n means after the last token).
  std::vector<std::size_t> insert_before(n + 1, 0);
  for (std::size_t i = 0; i < n_ins; ++i) ++insert_before[rng.below(n + 1)];

  auto draw_other = [&](const std::string& avoid) {
    if (pool.size() == 1) return pool[0];
    for (;;) {
      const auto& w = pool[rng.below(pool.size())];
      if (w != avoid) return w;
    }
  };

  Tokens out;
  out.reserve(n + n_ins);
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t k = 0; k < insert_before[i]; ++k) out.push_back(pool[rng.below(pool.size())]);
    if (i == n) break;
    switch (action[i]) {
      case kKeep: out.push_back(tokens[i]); break;
      case kSub: out.push_back(draw_other(tokens[i])); break;
      case kDel: break;
    }
  }
  return out;
}

}  // namespace howsumm::corpus
