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
#include <cctype>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "howsumm/common.hpp"

namespace howsumm::corpus {

// Lowercases ASCII letters, splits every ASCII punctuation character into its
// own token and collapses whitespace. Bytes >= 0x80 pass through unchanged,
// so multi-byte UTF-8 sequences stay intact inside their word.
inline Tokens tokenize(std::string_view text) {
  Tokens out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80 && std::isspace(c)) {
      flush();
    } else if (c < 0x80 && std::ispunct(c)) {
      flush();
      out.emplace_back(1, ch);
    } else {
      cur.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    }
  }
  flush();
  return out;
}

inline Tokens truncate(const Tokens& tokens, std::size_t limit) {
  if (limit < 1) throw Error("corpus", "truncate limit must be >= 1");
  const auto n = std::min(limit, tokens.size());
  return Tokens(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(n));
}

struct WordCount {
  std::string word;
  std::size_t count = 0;
};

// Descending count, lexicographic tie-break.
inline std::vector<WordCount> rank_counts(const std::map<std::string, std::size_t>& counts) {
  std::vector<WordCount> ranked;
  ranked.reserve(counts.size());
  for (const auto& [w, c] : counts) ranked.push_back({w, c});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const WordCount& a, const WordCount& b) { return a.count > b.count; });
  return ranked;
}

inline std::vector<WordCount> top_frequent_counts(std::span<const Tokens> docs, std::size_t k) {
  if (k < 1) throw Error("corpus", "top_frequent_words requires k >= 1");
  std::map<std::string, std::size_t> counts;
  for (const auto& doc : docs)
    for (const auto& w : doc) ++counts[w];
  auto ranked = rank_counts(counts);
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

inline Tokens top_frequent_words(std::span<const Tokens> docs, std::size_t k) {
  Tokens out;
  for (auto& wc : top_frequent_counts(docs, k)) out.push_back(std::move(wc.word));
  return out;
}

}  // namespace howsumm::corpus
