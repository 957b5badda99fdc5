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

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "howsumm/baselines/ngram_lm.hpp"
#include "howsumm/baselines/tfidf.hpp"
#include "howsumm/corpus/text.hpp"
#include "../support/synth.hpp"

namespace howsumm::baselines {
namespace {

std::vector<Tokens> docs(std::initializer_list<const char*> lines) {
  std::vector<Tokens> out;
  for (const char* l : lines) out.push_back(split_whitespace(l));
  return out;
}

TEST(NgramLM, BigramCountsByHand) {
  const auto lm = train_ngram_lm(docs({"a b"}), 2, 0.0);
  EXPECT_EQ(lm.context_counts.size(), 3u);
  EXPECT_EQ(lm.context_counts.at({kLmBos}), 1u);
  EXPECT_EQ(lm.context_counts.at({"a"}), 1u);
  EXPECT_EQ(lm.context_counts.at({"b"}), 1u);
  EXPECT_EQ(lm.continuations.at({kLmBos}).at("a"), 1u);
  EXPECT_EQ(lm.continuations.at({"a"}).at("b"), 1u);
  EXPECT_EQ(lm.continuations.at({"b"}).at(kLmEos), 1u);
}

TEST(NgramLM, AddKNormalizes) {
  const auto lm = train_ngram_lm(docs({"a b", "a c a"}), 2, 0.5);
  for (const auto& ctx : std::vector<Tokens>{{"a"}, {kLmBos}, {"zzz"}}) {
    double sum = 0;
    for (const double p : lm.distribution(ctx)) sum += p;
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  // P(b | a) = (1 + 0.5) / (3 + 0.5 * |{a, b, c, </s>}|)
  EXPECT_NEAR(lm.prob({"a"}, "b"), 1.5 / 5.0, 1e-12);
}

TEST(NgramLM, UnseenContextWithoutSmoothingThrows) {
  const auto lm = train_ngram_lm(docs({"a b"}), 2, 0.0);
  EXPECT_THROW(lm.distribution({"zzz"}), Error);
  EXPECT_THROW(train_ngram_lm(std::vector<Tokens>{}, 2, 0.0), Error);
}

TEST(SampleLm, OnePathChain) {
  const auto lm = train_ngram_lm(docs({"a b c"}), 3, 0.0);
  for (std::uint64_t s = 0; s < 20; ++s) EXPECT_EQ(sample_lm(lm, s, 10), (Tokens{"a", "b", "c"}));
  EXPECT_EQ(sample_lm(lm, 1, 2), (Tokens{"a", "b"}));
}

TEST(SampleLm, DeterministicAndClean) {
  const auto lm = train_ngram_lm(docs({"a b", "a c a", "b b c"}), 2, 0.3);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto x = sample_lm(lm, s, 12);
    EXPECT_EQ(x, sample_lm(lm, s, 12));
    for (const auto& w : x) {
      EXPECT_NE(w, kLmBos);
      EXPECT_NE(w, kLmEos);
    }
  }
}

TEST(SampleLm, TwoPathFrequenciesMatchConditionals) {
  // After "x": y with 3/4, z with 1/4; each path then ends.
  const auto lm = train_ngram_lm(docs({"x y", "x y", "x y", "x z"}), 2, 0.0);
  std::size_t y = 0;
  const std::size_t n = 10000;
  for (std::uint64_t s = 0; s < n; ++s) {
    const auto out = sample_lm(lm, s, 5);
    ASSERT_EQ(out.size(), 2u);
    y += out[1] == "y";
  }
  EXPECT_NEAR(static_cast<double>(y) / n, 0.75, 0.03);
}

// Independent tf-idf cosine: dense vectors over the sorted vocabulary.
double brute_cosine(const std::vector<Tokens>& corpus, const Tokens& q, const Tokens& d) {
  std::map<std::string, double> df;
  for (const auto& doc : corpus)
    for (const auto& w : std::set<std::string>(doc.begin(), doc.end())) df[w] += 1;
  double dot = 0, nq = 0, nd = 0;
  for (const auto& [w, c] : df) {
    const double idf = std::log(static_cast<double>(corpus.size()) / c);
    const double a = static_cast<double>(std::count(q.begin(), q.end(), w)) * idf;
    const double b = static_cast<double>(std::count(d.begin(), d.end(), w)) * idf;
    dot += a * b;
    nq += a * a;
    nd += b * b;
  }
  return nq == 0 || nd == 0 ? 0.0 : dot / std::sqrt(nq * nd);
}

TEST(Tfidf, ThreeDocumentsMatchBruteForce) {
  const auto corpus = docs({"peel the onion and chop it", "boil the eggs in water", "chop the carrots and peel"});
  const TfidfIndex index(corpus);
  for (const auto& q : docs({"chop the onion", "boil water", "peel carrots carrots", "nothing shared"})) {
    std::size_t best = 0;
    double best_sim = -1;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const double s = brute_cosine(corpus, q, corpus[i]);
      EXPECT_NEAR(cosine(index.weigh(q), index.vector(i)), s, 1e-12);
      if (s > best_sim + 1e-15) {
        best = i;
        best_sim = s;
      }
    }
    EXPECT_EQ(index.nearest(q).index, best) << join(q);
    EXPECT_NEAR(index.nearest(q).similarity, best_sim, 1e-12);
  }
}

corpus::Split split_of(const std::vector<Tokens>& transcripts) {
  corpus::Split s;
  for (std::size_t i = 0; i < transcripts.size(); ++i)
    s.push_back({std::to_string(i), transcripts[i], {"summary" + std::to_string(i)}, std::nullopt});
  return s;
}

TEST(NearestNeighbor, SelfQueryAndNoOverlap) {
  const auto train = split_of(docs({"peel the onion", "boil the eggs", "fry the fish"}));
  const auto index = build_transcript_index(train);
  EXPECT_EQ(nearest_neighbor_summary(train[1].transcript, index, train), Tokens{"summary1"});
  EXPECT_EQ(nearest_neighbor_summary({"zebra"}, index, train), Tokens{"summary0"});
  EXPECT_EQ(index.nearest({"zebra"}).similarity, 0.0);
  EXPECT_THROW(nearest_neighbor_summary({"x"}, TfidfIndex{}, corpus::Split{}), Error);
}

TEST(NearestNeighbor, DoublingTheIndexKeepsTheAnswer) {
  // Doubling every document leaves N/df, and so every idf, unchanged.
  const auto c = testing::recipe_corpus(3);
  const auto& train = c.split("train");
  auto doubled = train;
  doubled.insert(doubled.end(), train.begin(), train.end());
  const auto index = build_transcript_index(train), index2 = build_transcript_index(doubled);
  for (const auto& ex : c.split("test")) {
    EXPECT_EQ(index2.nearest(ex.transcript).index, index.nearest(ex.transcript).index);
    EXPECT_NEAR(index2.nearest(ex.transcript).similarity, index.nearest(ex.transcript).similarity, 1e-12);
  }
}

TEST(NearestNeighbor, DuplicatingOneDocumentCanShiftIdf) {
  // A single duplicate lowers the idf of its words and can flip the answer.
  const auto train = split_of(docs({"onion garlic", "carrot onion", "garlic carrot"}));
  const Tokens query = {"carrot", "fish"};
  EXPECT_EQ(nearest_neighbor_summary(query, build_transcript_index(train), train), Tokens{"summary1"});
  auto bigger = train;
  bigger.push_back(train[2]);
  const auto index = build_transcript_index(bigger);
  EXPECT_EQ(index.idf("garlic"), std::log(4.0 / 3.0));
  EXPECT_EQ(index.nearest(query).index, 2u);
}

TEST(Extractive, SingleAndTiedSentences) {
  EXPECT_EQ(extract_sentence({"just", "one"}), (Tokens{"just", "one"}));
  EXPECT_EQ(extract_sentence(split_whitespace("cut it . cut it .")), (Tokens{"cut", "it", "."}));
  EXPECT_THROW(extract_sentence({}), Error);
}

TEST(Extractive, DominantTermsSentenceMatchesExhaustiveCosine) {
  const auto t = split_whitespace(
      "welcome back . peel the onion . chop the garlic . onion garlic onion garlic . bye !");
  const auto sentences = split_sentences(t);
  ASSERT_EQ(sentences.size(), 5u);
  const double n = 5.0;
  // Centroid of the sentence vectors, computed densely.
  std::map<std::string, double> df;
  for (const auto& s : sentences)
    for (const auto& w : std::set<std::string>(s.begin(), s.end())) df[w] += 1;
  std::vector<std::map<std::string, double>> vecs;
  std::map<std::string, double> centroid;
  for (const auto& s : sentences) {
    auto& v = vecs.emplace_back();
    for (const auto& w : s) v[w] += std::log(n / df[w]);
    for (const auto& [w, x] : v) centroid[w] += x / n;
  }
  auto cos = [&](const std::map<std::string, double>& a) {
    double dot = 0, na = 0, nc = 0;
    for (const auto& [w, x] : centroid) {
      const double y = a.count(w) ? a.at(w) : 0.0;
      dot += x * y;
      na += y * y;
      nc += x * x;
    }
    return na == 0 ? 0.0 : dot / std::sqrt(na * nc);
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < sentences.size(); ++i)
    if (cos(vecs[i]) > cos(vecs[best])) best = i;
  EXPECT_EQ(best, 3u);
  EXPECT_EQ(extract_sentence(t), sentences[best]);
}

TEST(Extractive, OutputIsContiguousSubsequence) {
  const auto c = testing::recipe_corpus(9);
  for (const auto& ex : c.split("train")) {
    const auto s = extract_sentence(ex.transcript);
    EXPECT_NE(std::search(ex.transcript.begin(), ex.transcript.end(), s.begin(), s.end()), ex.transcript.end());
  }
}

}  // namespace
}  // namespace howsumm::baselines
