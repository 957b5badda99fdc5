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
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "howsumm/common.hpp"
#include "howsumm/eval/porter.hpp"

namespace howsumm::eval {

enum class MatchKind { kExact, kStem };

struct AlignedPair {
  std::size_t hyp = 0;
  std::size_t ref = 0;
  MatchKind kind = MatchKind::kExact;
  bool operator==(const AlignedPair&) const = default;
};

// Sorted by hyp index.
using Alignment = std::vector<AlignedPair>;

inline std::size_t count_crossings(const Alignment& a) {
  std::size_t n = 0;
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = x + 1; y < a.size(); ++y)
      if ((a[x].hyp < a[y].hyp) != (a[x].ref < a[y].ref)) ++n;
  return n;
}

struct AlignOptions {
  // Search nodes before falling back to the best alignment found so far.
  std::size_t node_budget = 2'000'000;
};

namespace detail {

// Ranking of complete alignments: more exact pairs, then more pairs, then
// fewer crossings.
struct AlignScore {
  std::size_t exact = 0;
  std::size_t total = 0;
  std::size_t crossings = 0;

  friend bool operator<(const AlignScore& a, const AlignScore& b) {
    return std::make_tuple(a.exact, a.total, b.crossings) < std::make_tuple(b.exact, b.total, a.crossings);
  }
  friend bool operator==(const AlignScore&, const AlignScore&) = default;
};

inline bool lex_less(const Alignment& a, const Alignment& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](const AlignedPair& x, const AlignedPair& y) {
    return std::tie(x.hyp, x.ref) < std::tie(y.hyp, y.ref);
  });
}

class Aligner {
 public:
  Aligner(const Tokens& hyp, const Tokens& ref, const AlignOptions& opt) : hyp_(hyp), ref_(ref), opt_(opt) {
    PorterStemmer stemmer;
    std::map<std::string, int> word_ids, stem_ids;
    auto id_of = [](std::map<std::string, int>& m, const std::string& s) {
      return m.emplace(s, static_cast<int>(m.size())).first->second;
    };
    for (const auto& w : hyp) {
      hyp_word_.push_back(id_of(word_ids, w));
      hyp_stem_.push_back(id_of(stem_ids, stemmer(w)));
    }
    for (const auto& w : ref) {
      ref_word_.push_back(id_of(word_ids, w));
      ref_stem_.push_back(id_of(stem_ids, stemmer(w)));
    }
    hyp_word_rem_.assign(word_ids.size(), 0);
    ref_word_free_.assign(word_ids.size(), 0);
    hyp_stem_rem_.assign(stem_ids.size(), 0);
    ref_stem_free_.assign(stem_ids.size(), 0);
    for (std::size_t i = 0; i < hyp.size(); ++i) {
      ++hyp_word_rem_[hyp_word_[i]];
      ++hyp_stem_rem_[hyp_stem_[i]];
    }
    for (std::size_t j = 0; j < ref.size(); ++j) {
      ++ref_word_free_[ref_word_[j]];
      ++ref_stem_free_[ref_stem_[j]];
    }
    used_.assign(ref.size(), false);
  }

  Alignment run() {
    best_ = greedy();
    best_score_ = score(best_);
    settled_ = false;
    nodes_ = 0;
    search(0);
    return best_;
  }

  // Left to right: each hyp word takes an exact partner if one is free,
  // otherwise a stem partner, choosing the free ref position that adds the
  // fewest crossings (lowest index on ties).
  Alignment greedy() const {
    Alignment a;
    std::vector<bool> used(ref_.size(), false);
    for (std::size_t i = 0; i < hyp_.size(); ++i) {
      for (const MatchKind kind : {MatchKind::kExact, MatchKind::kStem}) {
        std::size_t best_j = ref_.size(), best_cross = SIZE_MAX;
        for (std::size_t j = 0; j < ref_.size(); ++j) {
          if (used[j] || kind_of(i, j) != static_cast<int>(kind)) continue;
          std::size_t cross = 0;
          for (const auto& p : a) cross += p.ref > j ? 1 : 0;
          if (cross < best_cross) {
            best_cross = cross;
            best_j = j;
          }
        }
        if (best_j != ref_.size()) {
          used[best_j] = true;
          a.push_back({i, best_j, kind});
          break;
        }
      }
    }
    return a;
  }

 private:
  // 0 exact, 1 stem, -1 incompatible.
  int kind_of(std::size_t i, std::size_t j) const {
    if (hyp_word_[i] == ref_word_[j]) return 0;
    if (hyp_stem_[i] == ref_stem_[j]) return 1;
    return -1;
  }

  AlignScore score(const Alignment& a) const {
    AlignScore s;
    for (const auto& p : a) s.exact += p.kind == MatchKind::kExact ? 1 : 0;
    s.total = a.size();
    s.crossings = count_crossings(a);
    return s;
  }

  AlignScore bound() const {
    AlignScore b = cur_score_;
    for (std::size_t w = 0; w < hyp_word_rem_.size(); ++w) b.exact += std::min(hyp_word_rem_[w], ref_word_free_[w]);
    for (std::size_t s = 0; s < hyp_stem_rem_.size(); ++s) b.total += std::min(hyp_stem_rem_[s], ref_stem_free_[s]);
    return b;
  }

  void offer() {
    if (best_score_ < cur_score_) {
      best_ = cur_;
      best_score_ = cur_score_;
      settled_ = true;
    } else if (cur_score_ == best_score_ && !settled_) {
      // The first tie reached in search order is its smallest; compare it
      // once against the greedy seed.
      if (lex_less(cur_, best_)) best_ = cur_;
      settled_ = true;
    }
  }

  void search(std::size_t i) {
    if (++nodes_ > opt_.node_budget) return;
    const AlignScore b = bound();
    if (b < best_score_ || (settled_ && b == best_score_)) return;
    if (i == hyp_.size()) {
      offer();
      return;
    }
    const int w = hyp_word_[i], s = hyp_stem_[i];
    --hyp_word_rem_[w];
    --hyp_stem_rem_[s];
    for (std::size_t j = 0; j < ref_.size(); ++j) {
      if (used_[j]) continue;
      const int kind = kind_of(i, j);
      if (kind < 0) continue;
      std::size_t cross = 0;
      for (std::size_t q = j + 1; q < ref_.size(); ++q) cross += used_[q] ? 1 : 0;
      used_[j] = true;
      --ref_word_free_[ref_word_[j]];
      --ref_stem_free_[ref_stem_[j]];
      cur_.push_back({i, j, kind == 0 ? MatchKind::kExact : MatchKind::kStem});
      cur_score_.exact += kind == 0 ? 1 : 0;
      ++cur_score_.total;
      cur_score_.crossings += cross;
      search(i + 1);
      cur_score_.crossings -= cross;
      --cur_score_.total;
      cur_score_.exact -= kind == 0 ? 1 : 0;
      cur_.pop_back();
      ++ref_word_free_[ref_word_[j]];
      ++ref_stem_free_[ref_stem_[j]];
      used_[j] = false;
    }
    search(i + 1);
    ++hyp_word_rem_[w];
    ++hyp_stem_rem_[s];
  }

  const Tokens& hyp_;
  const Tokens& ref_;
  AlignOptions opt_;
  std::vector<int> hyp_word_, hyp_stem_, ref_word_, ref_stem_;
  std::vector<std::size_t> hyp_word_rem_, ref_word_free_, hyp_stem_rem_, ref_stem_free_;
  std::vector<bool> used_;
  Alignment cur_, best_;
  AlignScore cur_score_, best_score_;
  bool settled_ = false;
  std::size_t nodes_ = 0;
};

}  // namespace detail

// One-to-one monolingual alignment with exact and Porter-stem matches.
// Preference order: most exact pairs, then most pairs overall, then fewest
// crossing pairs; remaining ties go to the lexicographically smallest list
// of (hyp, ref) pairs. Solved by branch and bound seeded with the greedy
// left-to-right alignment.
inline Alignment align(const Tokens& hyp, const Tokens& ref, const AlignOptions& opt = {}) {
  if (hyp.empty() || ref.empty()) return {};
  return detail::Aligner(hyp, ref, opt).run();
}

}  // namespace howsumm::eval
