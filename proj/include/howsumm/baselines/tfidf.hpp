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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "howsumm/common.hpp"
#include "howsumm/corpus/corpus.hpp"

namespace howsumm::baselines {

using TermWeights = std::map<std::string, double>;

inline double norm(const TermWeights& w) {
  double s = 0.0;
  for (const auto& [t, x] : w) s += x * x;
  return std::sqrt(s);
}

inline double cosine(const TermWeights& a, const TermWeights& b) {
  const double na = norm(a), nb = norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  double dot = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) ++ia;
    else if (ib->first < ia->first) ++ib;
    else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return dot / (na * nb);
}

// tf-idf vectors over a document collection, idf(w) = ln(N / df(w)).
class TfidfIndex {
 public:
  TfidfIndex() = default;

  explicit TfidfIndex(std::span<const Tokens> docs) {
    std::map<std::string, std::size_t> df;
    std::vector<std::map<std::string, std::size_t>> tfs;
    for (const auto& d : docs) {
      auto& tf = tfs.emplace_back();
      for (const auto& w : d) ++tf[w];
      for (const auto& [w, c] : tf) ++df[w];
    }
    const double n = static_cast<double>(docs.size());
    for (const auto& [w, c] : df) idf_[w] = std::log(n / static_cast<double>(c));
    for (const auto& tf : tfs) {
      TermWeights v;
      for (const auto& [w, c] : tf) v[w] = static_cast<double>(c) * idf_.at(w);
      norms_.push_back(norm(v));
      vectors_.push_back(std::move(v));
    }
  }

  std::size_t size() const { return vectors_.size(); }
  bool empty() const { return vectors_.empty(); }
  double idf(const std::string& w) const {
    const auto it = idf_.find(w);
    return it == idf_.end() ? 0.0 : it->second;
  }
  const TermWeights& vector(std::size_t i) const { return vectors_.at(i); }
  double doc_norm(std::size_t i) const { return norms_.at(i); }

  // Terms unseen by the index carry no weight.
  TermWeights weigh(const Tokens& query) const {
    TermWeights v;
    for (const auto& w : query)
      if (const auto it = idf_.find(w); it != idf_.end()) v[w] += it->second;
    return v;
  }

  struct Match {
    std::size_t index = 0;
    double similarity = 0.0;
  };

  // Highest cosine; ties go to the lowest index.
  Match nearest(const Tokens& query) const {
    if (vectors_.empty()) throw Error("baselines", "empty index");
    const auto q = weigh(query);
    Match best{0, cosine(q, vectors_[0])};
    for (std::size_t i = 1; i < vectors_.size(); ++i) {
      const double s = cosine(q, vectors_[i]);
      if (s > best.similarity) best = {i, s};
    }
    return best;
  }

 private:
  std::map<std::string, double> idf_;
  std::vector<TermWeights> vectors_;
  std::vector<double> norms_;
};

inline TfidfIndex build_transcript_index(const corpus::Split& train) {
  std::vector<Tokens> docs;
  for (const auto& ex : train) docs.push_back(ex.transcript);
  return TfidfIndex(docs);
}

// Summary of the training example whose transcript is most similar to the
// query.
inline Tokens nearest_neighbor_summary(const Tokens& query, const TfidfIndex& index, const corpus::Split& train) {
  if (index.empty()) throw Error("baselines", "empty index");
  if (index.size() != train.size()) throw Error("baselines", "index and training split differ in size");
  return train[index.nearest(query).index].summary;
}

inline bool is_sentence_end(const std::string& t) { return t == "." || t == "!" || t == "?"; }

// Sentences end at (and include) ./!/? tokens; a trailing run without a
// terminator forms the last sentence.
inline std::vector<Tokens> split_sentences(const Tokens& transcript) {
  std::vector<Tokens> out;
  Tokens cur;
  for (const auto& t : transcript) {
    cur.push_back(t);
    if (is_sentence_end(t)) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// Picks the sentence whose tf-idf vector (idf over the transcript's
// sentences) is closest in cosine to the mean sentence vector. Ties go to the
// earliest sentence.
inline Tokens extract_sentence(const Tokens& transcript) {
  if (transcript.empty()) throw Error("baselines", "empty transcript");
  const auto sentences = split_sentences(transcript);
  if (sentences.size() == 1) return sentences[0];
  const TfidfIndex index(sentences);
  TermWeights centroid;
  const double inv = 1.0 / static_cast<double>(sentences.size());
  for (std::size_t i = 0; i < index.size(); ++i)
    for (const auto& [w, x] : index.vector(i)) centroid[w] += x * inv;
  std::size_t best = 0;
  double best_sim = cosine(index.vector(0), centroid);
  for (std::size_t i = 1; i < index.size(); ++i) {
    const double s = cosine(index.vector(i), centroid);
    if (s > best_sim) {
      best = i;
      best_sim = s;
    }
  }
  return sentences[best];
}

}  // namespace howsumm::baselines
