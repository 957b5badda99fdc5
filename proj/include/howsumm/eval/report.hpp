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
#include <string>
#include <vector>

#include "howsumm/common.hpp"
#include "howsumm/eval/content_f1.hpp"
#include "howsumm/eval/rouge.hpp"

namespace howsumm::eval {

struct ExampleScore {
  std::string id;
  PRF rouge_l;
  PRF content_f1;
};

struct EvalReport {
  std::vector<ExampleScore> examples;
  PRF macro_rouge_l;
  PRF macro_content_f1;

  std::size_t count() const { return examples.size(); }

  // Columns: id, rouge_p, rouge_r, rouge_f, cf1_p, cf1_r, cf1_f; the last
  // row carries the macro averages under id "macro".
  std::string to_tsv() const {
    std::string out = "id\trouge_p\trouge_r\trouge_f\tcf1_p\tcf1_r\tcf1_f\n";
    char buf[256];
    auto row = [&](const std::string& id, const PRF& r, const PRF& c) {
      std::snprintf(buf, sizeof buf, "\t%.6f\t%.6f\t%.6f\t%.6f\t%.6f\t%.6f\n", r.p, r.r, r.f, c.p, c.r, c.f);
      out += id + buf;
    };
    for (const auto& e : examples) row(e.id, e.rouge_l, e.content_f1);
    row("macro", macro_rouge_l, macro_content_f1);
    return out;
  }
};

// Per-line scoring fans out across workers; the macro means are reduced in
// line order.
inline EvalReport evaluate_lines(const std::vector<Tokens>& hyps, const std::vector<Tokens>& refs, const StopSet& stop,
                                 double beta = 1.0) {
  if (hyps.size() != refs.size())
    throw Error("eval", "line-count mismatch (" + std::to_string(hyps.size()) + " hypotheses vs " +
                            std::to_string(refs.size()) + " references)");
  EvalReport report;
  report.examples.resize(hyps.size());
  parallel_for(hyps.size(), [&](std::size_t i) {
    auto& e = report.examples[i];
    e.id = std::to_string(i);
    e.rouge_l = rouge_l(hyps[i], refs[i], beta);
    e.content_f1 = content_f1(hyps[i], refs[i], stop);
  });
  if (!report.examples.empty()) {
    auto& r = report.macro_rouge_l;
    auto& c = report.macro_content_f1;
    for (const auto& e : report.examples) {
      r.p += e.rouge_l.p;
      r.r += e.rouge_l.r;
      r.f += e.rouge_l.f;
      c.p += e.content_f1.p;
      c.r += e.content_f1.r;
      c.f += e.content_f1.f;
    }
    const double n = static_cast<double>(report.examples.size());
    for (double* x : {&r.p, &r.r, &r.f, &c.p, &c.r, &c.f}) *x /= n;
  }
  return report;
}

inline std::vector<Tokens> read_token_lines(const std::filesystem::path& path) {
  const auto lines = read_lines(path, "eval");
  std::vector<Tokens> out;
  out.reserve(lines.size());
  for (const auto& l : lines) out.push_back(split_whitespace(l));
  return out;
}

inline EvalReport evaluate_corpus(const std::filesystem::path& hyp_file, const std::filesystem::path& ref_file,
                                  const StopSet& stop, double beta = 1.0) {
  return evaluate_lines(read_token_lines(hyp_file), read_token_lines(ref_file), stop, beta);
}

}  // namespace howsumm::eval
