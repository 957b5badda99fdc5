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
#include <functional>
#include <limits>
#include <set>
#include <utility>
#include <vector>

#include "howsumm/common.hpp"

namespace howsumm::models {

struct BeamOptions {
  std::size_t beam_size = 5;
  std::size_t max_len = 50;  // decoding steps, the EOS step included
  std::int32_t bos = 1;
  std::int32_t eos = 2;
  std::set<std::int32_t> banned;  // never emitted
};

struct BeamResult {
  TokenIds tokens;  // EOS stripped
  double score = 0.0;  // mean log-prob over emitted steps
  bool finished = false;
};

// Length-normalized beam search. `expand(state, prev_token)` returns the
// successor state and the log-probabilities of every next token.
//
// Each step ranks all (hypothesis, token) extensions by cumulative log-prob,
// breaking ties by token id and then hypothesis order, and keeps
// beam_size - |finished| of them. Extensions ending in EOS retire. The
// result is the best retired hypothesis by mean log-prob, with the
// surviving ones also eligible when max_len cuts the search off.
template <class State, class Expand>
BeamResult beam_search(State init, Expand&& expand, const BeamOptions& opt) {
  if (opt.beam_size < 1) throw Error("models", "beam_size must be >= 1");
  struct Hyp {
    State state;
    TokenIds tokens;
    double sum = 0.0;
    std::int32_t last = 0;
  };
  struct Cand {
    double sum;
    std::int32_t token;
    std::size_t hyp;
  };
  std::vector<Hyp> alive;
  alive.push_back({std::move(init), {}, 0.0, opt.bos});
  std::vector<BeamResult> finished;

  for (std::size_t step = 0; step < opt.max_len && !alive.empty() && finished.size() < opt.beam_size; ++step) {
    std::vector<Cand> cands;
    std::vector<State> next_states;
    for (std::size_t h = 0; h < alive.size(); ++h) {
      auto [st, logp] = expand(alive[h].state, alive[h].last);
      next_states.push_back(std::move(st));
      for (std::size_t tok = 0; tok < logp.size(); ++tok) {
        const auto t = static_cast<std::int32_t>(tok);
        if (opt.banned.count(t)) continue;
        cands.push_back({alive[h].sum + static_cast<double>(logp[tok]), t, h});
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.sum != b.sum) return a.sum > b.sum;
      if (a.token != b.token) return a.token < b.token;
      return a.hyp < b.hyp;
    });
    const std::size_t keep = opt.beam_size - finished.size();
    std::vector<Hyp> next;
    for (std::size_t c = 0; c < cands.size() && c < keep; ++c) {
      const auto& cand = cands[c];
      const auto& parent = alive[cand.hyp];
      const double len = static_cast<double>(parent.tokens.size() + 1);
      if (cand.token == opt.eos) {
        finished.push_back({parent.tokens, cand.sum / len, true});
      } else {
        Hyp h{next_states[cand.hyp], parent.tokens, cand.sum, cand.token};
        h.tokens.push_back(cand.token);
        next.push_back(std::move(h));
      }
    }
    alive = std::move(next);
  }

  std::vector<BeamResult> pool = finished;
  if (finished.size() < opt.beam_size)
    for (const auto& h : alive)
      if (!h.tokens.empty()) pool.push_back({h.tokens, h.sum / static_cast<double>(h.tokens.size()), false});
  if (pool.empty()) return {};
  std::size_t best = 0;
  for (std::size_t i = 1; i < pool.size(); ++i)
    if (pool[i].score > pool[best].score) best = i;
  return pool[best];
}

}  // namespace howsumm::models
