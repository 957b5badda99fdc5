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

#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "howsumm/common.hpp"
#include "howsumm/corpus/vocabulary.hpp"
#include "howsumm/models/model.hpp"

namespace howsumm::models {

// TSV layout: a header row "token", "<modality>:<position>"... and, for the
// hierarchical model, "beta:<modality>"...; then one row per output step
// labeled by the emitted token.
inline std::string format_attention(const AttentionTrace& trace, const corpus::Vocabulary& vocab) {
  if (trace.steps() == 0) throw Error("models", "empty attention trace");
  std::string out = "token";
  for (std::size_t k = 0; k < trace.modalities.size(); ++k)
    for (std::size_t i = 0; i < trace.rows[k][0].size(); ++i)
      out += "\t" + trace.modalities[k] + ":" + std::to_string(i);
  if (!trace.betas.empty())
    for (const auto& m : trace.modalities) out += "\tbeta:" + m;
  out += "\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "\t%.9g", v);
    out += buf;
  };
  for (std::size_t t = 0; t < trace.steps(); ++t) {
    out += vocab.word(trace.tokens[t]);
    for (std::size_t k = 0; k < trace.modalities.size(); ++k)
      for (const double w : trace.rows[k][t]) put(w);
    if (!trace.betas.empty())
      for (const double b : trace.betas[t]) put(b);
    out += "\n";
  }
  return out;
}

inline void export_attention(const AttentionTrace& trace, const corpus::Vocabulary& vocab,
                             const std::filesystem::path& out_path) {
  const auto text = format_attention(trace, vocab);
  try {
    atomic_write(out_path, text);
  } catch (const Error&) {
    throw Error("models", "cannot write attention file " + out_path.string());
  }
}

struct AttentionTable {
  Tokens labels;
  std::vector<std::string> modalities;
  std::vector<std::vector<std::vector<double>>> rows;  // [modality][step][position]
  std::vector<std::vector<double>> betas;
};

inline AttentionTable parse_attention(const std::vector<std::string>& lines) {
  if (lines.empty()) throw Error("models", "empty attention file");
  const auto header = [&] {
    std::vector<std::string> cols;
    std::size_t start = 0;
    const auto& h = lines[0];
    while (true) {
      const auto tab = h.find('\t', start);
      cols.push_back(h.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    return cols;
  }();
  AttentionTable table;
  std::vector<std::pair<int, std::size_t>> where;  // (modality index or -1 for beta, slot)
  std::map<std::string, std::size_t> mod_index;
  std::size_t betas = 0;
  for (std::size_t c = 1; c < header.size(); ++c) {
    const auto colon = header[c].find(':');
    if (colon == std::string::npos) throw Error("models", "bad attention column '" + header[c] + "'");
    const auto kind = header[c].substr(0, colon);
    if (kind == "beta") {
      where.emplace_back(-1, betas++);
      continue;
    }
    if (!mod_index.count(kind)) {
      mod_index[kind] = table.modalities.size();
      table.modalities.push_back(kind);
    }
    where.emplace_back(static_cast<int>(mod_index[kind]), 0);
  }
  table.rows.resize(table.modalities.size());
  for (std::size_t l = 1; l < lines.size(); ++l) {
    if (lines[l].empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto tab = lines[l].find('\t', start);
      cells.push_back(lines[l].substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cells.size() != header.size()) throw Error("models", "attention row has the wrong column count");
    table.labels.push_back(cells[0]);
    for (auto& r : table.rows) r.emplace_back();
    if (betas) table.betas.emplace_back();
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const double v = std::stod(cells[c]);
      const auto [mod, slot] = where[c - 1];
      if (mod < 0) table.betas.back().push_back(v);
      else table.rows[static_cast<std::size_t>(mod)].back().push_back(v);
    }
  }
  return table;
}

}  // namespace howsumm::models
