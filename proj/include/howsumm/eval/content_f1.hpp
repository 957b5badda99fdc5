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

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "howsumm/common.hpp"
#include "howsumm/corpus/text.hpp"
#include "howsumm/eval/align.hpp"
#include "howsumm/eval/function_words.hpp"
#include "howsumm/eval/rouge.hpp"

namespace howsumm::eval {

// Function words plus task-specific words that appear in most summaries.
struct StopSet {
  std::set<std::string> function_words;
  std::set<std::string> task_words;

  bool contains(const std::string& w) const { return function_words.count(w) || task_words.count(w); }
  std::size_t size() const {
    std::size_t n = function_words.size();
    for (const auto& w : task_words) n += function_words.count(w) ? 0 : 1;
    return n;
  }
};

inline StopSet function_word_stopset() {
  StopSet s;
  for (const auto w : kFunctionWords) s.function_words.emplace(w);
  return s;
}

// Task words: within the top_k frequency ranks of the summaries and present
// in at least doc_frac of them.
inline StopSet derive_stopwords(std::span<const Tokens> summaries, std::size_t top_k = 25, double doc_frac = 0.4) {
  if (summaries.empty()) throw Error("eval", "derive_stopwords needs at least one summary");
  StopSet s = function_word_stopset();
  if (top_k == 0) return s;
  std::map<std::string, std::size_t> doc_count;
  for (const auto& sum : summaries)
    for (const auto& w : std::set<std::string>(sum.begin(), sum.end())) ++doc_count[w];
  const double n = static_cast<double>(summaries.size());
  for (const auto& w : corpus::top_frequent_words(summaries, top_k))
    if (static_cast<double>(doc_count[w]) >= doc_frac * n) s.task_words.insert(w);
  return s;
}

struct ContentMatch {
  PRF score;
  std::size_t hyp_content = 0;
  std::size_t ref_content = 0;
  Alignment matched;  // aligned pairs whose endpoints are both content words
};

// Aligns the full sequences first, then drops stop words from both sides and
// scores the surviving aligned pairs as two bags of content words.
inline ContentMatch content_f1_detail(const Tokens& hyp, const Tokens& ref, const StopSet& stop) {
  ContentMatch m;
  for (const auto& w : hyp) m.hyp_content += stop.contains(w) ? 0 : 1;
  for (const auto& w : ref) m.ref_content += stop.contains(w) ? 0 : 1;
  for (const auto& p : align(hyp, ref))
    if (!stop.contains(hyp[p.hyp]) && !stop.contains(ref[p.ref])) m.matched.push_back(p);
  const auto hits = static_cast<double>(m.matched.size());
  if (m.hyp_content == 0 && m.ref_content == 0) {
    m.score = {1.0, 1.0, 1.0};
    return m;
  }
  m.score.p = m.hyp_content ? hits / static_cast<double>(m.hyp_content) : 0.0;
  m.score.r = m.ref_content ? hits / static_cast<double>(m.ref_content) : 0.0;
  m.score.f = f_beta(m.score.p, m.score.r, 1.0);
  return m;
}

inline PRF content_f1(const Tokens& hyp, const Tokens& ref, const StopSet& stop) {
  return content_f1_detail(hyp, ref, stop).score;
}

}  // namespace howsumm::eval
