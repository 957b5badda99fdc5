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

#include <array>
#include <string_view>

namespace howsumm::eval {

// English closed-class words (articles, pronouns, prepositions,
// conjunctions, auxiliaries, determiners, common particles). Changing this
// list changes Content F1 scores, so edits bump the version.
inline constexpr std::string_view kFunctionWordsVersion = "1";

inline constexpr std::array<std::string_view, 150> kFunctionWords = {
    "a",       "about",   "above",  "after",      "again",   "against", "all",     "am",      "an",
    "and",     "any",     "are",    "as",         "at",      "be",      "because", "been",    "before",
    "being",   "below",   "between","both",       "but",     "by",      "can",     "could",   "did",
    "do",      "does",    "doing",  "down",       "during",  "each",    "either",  "every",   "few",
    "for",     "from",    "further","had",        "has",     "have",    "having",  "he",      "her",
    "here",    "hers",    "herself","him",        "himself", "his",     "how",     "i",       "if",
    "in",      "into",    "is",     "it",         "its",     "itself",  "just",    "may",     "me",
    "might",   "more",    "most",   "must",       "my",      "myself",  "neither", "no",      "nor",
    "not",     "of",      "off",    "on",         "once",    "only",    "or",      "other",   "ought",
    "our",     "ours",    "ourselves","out",      "over",    "own",     "same",    "shall",   "she",
    "should",  "so",      "some",   "such",       "than",    "that",    "the",     "their",   "theirs",
    "them",    "themselves","then", "there",      "these",   "they",    "this",    "those",   "through",
    "to",      "too",     "under",  "until",      "up",      "upon",    "us",      "very",    "was",
    "we",      "were",    "what",   "when",       "where",   "whether", "which",   "while",   "who",
    "whom",    "whose",   "why",    "will",       "with",    "within",  "without", "would",   "you",
    "your",    "yours",   "yourself","yourselves","'s",      "-",       ",",       ".",       "'",
    "n't",     "'re",     "'ll",    "'ve",        "'m",      "'d"};

}  // namespace howsumm::eval
