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
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "howsumm/common.hpp"
#include "howsumm/corpus/text.hpp"

namespace howsumm::corpus {

inline constexpr std::int32_t kPad = 0;
inline constexpr std::int32_t kBos = 1;
inline constexpr std::int32_t kEos = 2;
inline constexpr std::int32_t kUnk = 3;
inline constexpr std::size_t kNumSpecials = 4;

inline bool is_special_token(const std::string& w) {
  return w == "<pad>" || w == "<s>" || w == "</s>" || w == "<unk>";
}

// Frequency-ranked word <-> id map. Ids 0-3 are the special symbols.
class Vocabulary {
 public:
  Vocabulary() : Vocabulary(Tokens{}) {}

  // `words` are the non-special entries in id order (id = 4 + index).
  explicit Vocabulary(const Tokens& words) {
    words_ = {"<pad>", "<s>", "</s>", "<unk>"};
    for (const auto& w : words) {
      if (index_.count(w) || is_special_token(w))
        throw Error("corpus", "duplicate vocabulary entry '" + w + "'");
      index_[w] = static_cast<std::int32_t>(words_.size());
      words_.push_back(w);
    }
  }

  std::size_t size() const { return words_.size(); }
  const std::string& word(std::int32_t id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= words_.size())
      throw Error("corpus", "id out of range: " + std::to_string(id));
    return words_[static_cast<std::size_t>(id)];
  }
  std::int32_t id(const std::string& w) const {
    const auto it = index_.find(w);
    return it == index_.end() ? kUnk : it->second;
  }
  bool contains(const std::string& w) const { return index_.count(w) != 0; }

  // Non-special entries, in id order.
  Tokens entries() const { return Tokens(words_.begin() + kNumSpecials, words_.end()); }

  TokenIds encode(const Tokens& tokens) const {
    TokenIds ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) ids.push_back(id(t));
    return ids;
  }

  // Drops PAD/BOS/EOS; UNK decodes to "<unk>".
  Tokens decode(std::span<const std::int32_t> ids) const {
    Tokens out;
    for (const auto i : ids) {
      const auto& w = word(i);
      if (i == kPad || i == kBos || i == kEos) continue;
      out.push_back(w);
    }
    return out;
  }

  // One entry per line in id order, specials excluded.
  std::string serialize() const {
    std::string out;
    for (std::size_t i = kNumSpecials; i < words_.size(); ++i) out += words_[i] + "\n";
    return out;
  }
  static Vocabulary parse(const std::vector<std::string>& lines) {
    Tokens words;
    for (const auto& l : lines)
      if (!l.empty()) words.push_back(l);
    return Vocabulary(words);
  }

 private:
  Tokens words_;
  std::unordered_map<std::string, std::int32_t> index_;
};

// Keeps the size_cap most frequent words over the given token sequences.
inline Vocabulary build_vocab_from(std::span<const Tokens> docs, std::size_t size_cap) {
  if (size_cap < 1) throw Error("corpus", "vocabulary size_cap must be >= 1");
  if (docs.empty()) throw Error("corpus", "empty corpus");
  std::map<std::string, std::size_t> counts;
  for (const auto& d : docs)
    for (const auto& w : d) ++counts[w];
  auto ranked = rank_counts(counts);
  Tokens words;
  for (std::size_t i = 0; i < ranked.size() && words.size() < size_cap; ++i)
    if (!is_special_token(ranked[i].word)) words.push_back(ranked[i].word);
  return Vocabulary(words);
}

}  // namespace howsumm::corpus
