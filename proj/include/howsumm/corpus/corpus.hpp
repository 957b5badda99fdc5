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

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "howsumm/common.hpp"
#include "howsumm/corpus/features.hpp"
#include "howsumm/corpus/text.hpp"
#include "howsumm/corpus/vocabulary.hpp"

namespace howsumm::corpus {

struct MultimodalExample {
  std::string id;
  Tokens transcript;
  Tokens summary;
  std::optional<FeatureSequence> features;
};

using Split = std::vector<MultimodalExample>;

struct Corpus {
  std::map<std::string, Split> splits;
  std::size_t feature_dim = 0;  // 0 when no split carries features

  const Split& split(const std::string& name) const {
    const auto it = splits.find(name);
    if (it == splits.end()) throw Error("corpus", "no split named '" + name + "'");
    return it->second;
  }
  bool has_split(const std::string& name) const { return splits.count(name) != 0; }
};

enum class VocabScope { kJoint, kSource, kTarget };

inline Vocabulary build_vocab(const Split& train, std::size_t size_cap,
                              VocabScope scope = VocabScope::kJoint) {
  if (size_cap < 1) throw Error("corpus", "vocabulary size_cap must be >= 1");
  if (train.empty()) throw Error("corpus", "empty corpus");
  std::vector<Tokens> docs;
  for (const auto& ex : train) {
    if (scope != VocabScope::kTarget) docs.push_back(ex.transcript);
    if (scope != VocabScope::kSource) docs.push_back(ex.summary);
  }
  return build_vocab_from(docs, size_cap);
}

// Checks the per-example and per-split invariants; returns the common
// feature dimension (0 if no features).
inline std::size_t validate_split(const Split& split, const std::string& name) {
  std::set<std::string> ids;
  std::size_t dim = 0;
  std::size_t with_features = 0;
  for (const auto& ex : split) {
    if (!ids.insert(ex.id).second) throw Error("corpus", "duplicate id '" + ex.id + "' in " + name);
    if (ex.transcript.empty()) throw Error("corpus", "empty transcript for id '" + ex.id + "'");
    if (ex.summary.empty()) throw Error("corpus", "empty summary for id '" + ex.id + "'");
    if (!ex.features) continue;
    ++with_features;
    if (ex.features->empty()) throw Error("corpus", "empty feature sequence for id '" + ex.id + "'");
    for (const auto& row : *ex.features) {
      if (dim == 0) dim = row.size();
      if (row.size() != dim) throw Error("corpus", "feature-dimension mismatch for id '" + ex.id + "'");
    }
  }
  if (with_features != 0 && with_features != split.size())
    throw Error("corpus", "split " + name + " has features for only some examples");
  return dim;
}

namespace detail {

inline std::map<std::string, std::string> parse_key_values(const std::filesystem::path& path,
                                                           std::string_view module) {
  std::map<std::string, std::string> kv;
  std::size_t lineno = 0;
  for (const auto& raw : read_lines(path, module)) {
    ++lineno;
    const auto line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(module, path.filename().string() + ":" + std::to_string(lineno) + ": expected key=value");
    auto key = trim(std::string_view(line).substr(0, eq));
    auto value = trim(std::string_view(line).substr(eq + 1));
    if (kv.count(key)) throw Error(module, "duplicate key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

}  // namespace detail

// Manifest keys per split S in {train, val, test}: S.transcripts,
// S.summaries, optional S.features_dir and S.ids. Relative paths resolve
// against the manifest's directory. `raw_text = true` runs tokenize() over
// each line instead of splitting on whitespace.
inline Corpus load_corpus(const std::filesystem::path& manifest_path) {
  namespace fs = std::filesystem;
  if (!fs::exists(manifest_path)) throw Error("corpus", "manifest not found: " + manifest_path.string());
  auto kv = detail::parse_key_values(manifest_path, "corpus");
  const fs::path base = manifest_path.parent_path();
  auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : base / path;
  };
  bool raw_text = false;
  if (auto it = kv.find("raw_text"); it != kv.end()) {
    raw_text = it->second == "true" || it->second == "1";
    kv.erase(it);
  }
  const std::set<std::string> split_names = {"train", "val", "test"};
  const std::set<std::string> fields = {"transcripts", "summaries", "features_dir", "ids"};
  std::map<std::string, std::map<std::string, std::string>> per_split;
  for (const auto& [key, value] : kv) {
    const auto dot = key.find('.');
    const auto s = key.substr(0, dot);
    const auto f = dot == std::string::npos ? "" : key.substr(dot + 1);
    if (!split_names.count(s) || !fields.count(f)) throw Error("corpus", "unknown manifest key '" + key + "'");
    per_split[s][f] = value;
  }

  auto to_tokens = [&](const std::string& line) { return raw_text ? tokenize(line) : split_whitespace(line); };
  auto content_lines = [](std::vector<std::string> lines) {
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    return lines;
  };

  Corpus corpus;
  for (const auto& [name, f] : per_split) {
    if (!f.count("transcripts") || !f.count("summaries"))
      throw Error("corpus", "split " + name + " needs both transcripts and summaries");
    const auto src = content_lines(read_lines(resolve(f.at("transcripts")), "corpus"));
    const auto tgt = content_lines(read_lines(resolve(f.at("summaries")), "corpus"));
    if (src.size() != tgt.size())
      throw Error("corpus", "line-count mismatch in split " + name + " (" + std::to_string(src.size()) +
                                " transcripts vs " + std::to_string(tgt.size()) + " summaries)");
    std::vector<std::string> ids;
    if (f.count("ids")) {
      ids = content_lines(read_lines(resolve(f.at("ids")), "corpus"));
      if (ids.size() != src.size()) throw Error("corpus", "line-count mismatch between ids and transcripts in " + name);
      for (auto& id : ids) id = trim(id);
    } else {
      for (std::size_t i = 0; i < src.size(); ++i) ids.push_back(std::to_string(i));
    }
    Split split;
    for (std::size_t i = 0; i < src.size(); ++i) {
      MultimodalExample ex{ids[i], to_tokens(src[i]), to_tokens(tgt[i]), std::nullopt};
      if (f.count("features_dir")) {
        const auto path = resolve(f.at("features_dir")) / (ids[i] + ".vfea");
        if (!fs::exists(path)) throw Error("corpus", "missing feature file for id '" + ids[i] + "'");
        ex.features = read_features(path);
      }
      split.push_back(std::move(ex));
    }
    const auto dim = validate_split(split, name);
    if (dim != 0) {
      if (corpus.feature_dim != 0 && corpus.feature_dim != dim)
        throw Error("corpus", "feature-dimension mismatch across splits");
      corpus.feature_dim = dim;
    }
    corpus.splits[name] = std::move(split);
  }
  return corpus;
}

}  // namespace howsumm::corpus
