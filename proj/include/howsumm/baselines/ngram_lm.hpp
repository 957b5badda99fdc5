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
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "howsumm/common.hpp"

namespace howsumm::baselines {

inline const std::string kLmBos = "<s>";
inline const std::string kLmEos = "</s>";

// Add-k smoothed n-gram model over summaries, padded with n-1 BOS symbols and
// terminated by EOS.
struct NgramLM {
  std::size_t order = 3;
  double k = 0.01;
  std::map<Tokens, std::map<std::string, std::size_t>> continuations;
  std::map<Tokens, std::size_t> context_counts;
  Tokens vocab;  // predictable symbols (training words plus EOS), sorted

  Tokens context_of(const Tokens& history) const {
    Tokens ctx(order - 1, kLmBos);
    const std::size_t take = std::min(history.size(), order - 1);
    for (std::size_t i = 0; i < take; ++i) ctx[order - 1 - take + i] = history[history.size() - take + i];
    return ctx;
  }

  // P(w | ctx) for every vocab entry, in vocab order.
  std::vector<double> distribution(const Tokens& ctx) const {
    const auto cit = context_counts.find(ctx);
    const double total = cit == context_counts.end() ? 0.0 : static_cast<double>(cit->second);
    const double denom = total + k * static_cast<double>(vocab.size());
    if (!(denom > 0.0))
      throw Error("baselines", "zero-probability context '" + join(ctx) + "' (unseen context with k=0)");
    std::vector<double> p(vocab.size(), k / denom);
    if (cit != context_counts.end()) {
      const auto& cont = continuations.at(ctx);
      for (std::size_t i = 0; i < vocab.size(); ++i)
        if (const auto it = cont.find(vocab[i]); it != cont.end()) p[i] += static_cast<double>(it->second) / denom;
    }
    return p;
  }

  double prob(const Tokens& ctx, const std::string& word) const {
    const auto it = std::lower_bound(vocab.begin(), vocab.end(), word);
    if (it == vocab.end() || *it != word) {
      // Unknown words get no mass; still validates the context.
      distribution(ctx);
      return 0.0;
    }
    return distribution(ctx)[static_cast<std::size_t>(it - vocab.begin())];
  }
};

inline NgramLM train_ngram_lm(std::span<const Tokens> summaries, std::size_t n, double k) {
  if (n < 1) throw Error("baselines", "n-gram order must be >= 1");
  if (!(k >= 0.0)) throw Error("baselines", "smoothing constant k must be >= 0");
  if (summaries.empty()) throw Error("baselines", "empty input");
  NgramLM lm;
  lm.order = n;
  lm.k = k;
  std::set<std::string> vocab{kLmEos};
  for (const auto& s : summaries) {
    Tokens padded(n - 1, kLmBos);
    padded.insert(padded.end(), s.begin(), s.end());
    padded.push_back(kLmEos);
    for (std::size_t i = n - 1; i < padded.size(); ++i) {
      Tokens ctx(padded.begin() + static_cast<std::ptrdiff_t>(i - (n - 1)), padded.begin() + static_cast<std::ptrdiff_t>(i));
      ++lm.continuations[ctx][padded[i]];
      ++lm.context_counts[ctx];
      vocab.insert(padded[i]);
    }
  }
  lm.vocab.assign(vocab.begin(), vocab.end());
  return lm;
}

// Ancestral sampling until EOS or max_len words; EOS is not returned.
inline Tokens sample_lm(const NgramLM& lm, std::uint64_t seed, std::size_t max_len) {
  if (max_len < 1) throw Error("baselines", "max_len must be >= 1");
  Rng rng(seed);
  Tokens out;
  while (out.size() < max_len) {
    const auto p = lm.distribution(lm.context_of(out));
    const double u = rng.uniform01();
    double acc = 0.0;
    std::size_t pick = p.size() - 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
      acc += p[i];
      if (u < acc) {
        pick = i;
        break;
      }
    }
    if (lm.vocab[pick] == kLmEos) break;
    out.push_back(lm.vocab[pick]);
  }
  return out;
}

}  // namespace howsumm::baselines
