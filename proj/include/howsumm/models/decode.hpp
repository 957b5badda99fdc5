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
#include <cstdint>
#include <utility>
#include <vector>

#include "howsumm/common.hpp"
#include "howsumm/corpus/vocabulary.hpp"
#include "howsumm/models/beam_search.hpp"
#include "howsumm/models/model.hpp"

namespace howsumm::models {

// Inference over one input on a value-only tape. The model is only read, so
// distinct sessions may run concurrently on one model.
template <class T>
class DecodeSession {
 public:
  DecodeSession(const Model<T>& model, const EncodedExample& input)
      : model_(model), tape_(&model.params, false), enc_(encode(tape_, model, input)) {}

  DecoderState start() { return initial_state(tape_, model_, enc_); }

  // Successor state and next-token log-probabilities.
  std::pair<DecoderState, std::vector<double>> step(const DecoderState& st, std::int32_t prev) {
    auto out = decoder_step(tape_, model_, enc_, st, prev);
    const auto& logits = tape_.value(out.logits);
    std::vector<double> logp(logits.size());
    double mx = logits[0];
    for (std::size_t i = 0; i < logits.size(); ++i) mx = std::max(mx, static_cast<double>(logits[i]));
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) sum += std::exp(static_cast<double>(logits[i]) - mx);
    const double lse = mx + std::log(sum);
    for (std::size_t i = 0; i < logits.size(); ++i) logp[i] = static_cast<double>(logits[i]) - lse;
    return {std::move(out.state), std::move(logp)};
  }

 private:
  const Model<T>& model_;
  Tape<T> tape_;
  Encoded<T> enc_;
};

inline bool is_banned_output(std::int32_t id) { return id == corpus::kPad || id == corpus::kBos; }

// Argmax at every step (ties to the lowest id); stops at EOS or after
// max_len steps. The result never contains PAD, BOS or EOS.
template <class T>
TokenIds greedy_decode(const Model<T>& model, const EncodedExample& input, std::size_t max_len) {
  DecodeSession<T> session(model, input);
  auto st = session.start();
  TokenIds out;
  std::int32_t prev = corpus::kBos;
  for (std::size_t step = 0; step < max_len; ++step) {
    auto [next, logp] = session.step(st, prev);
    std::int32_t best = -1;
    for (std::size_t i = 0; i < logp.size(); ++i) {
      const auto id = static_cast<std::int32_t>(i);
      if (is_banned_output(id)) continue;
      if (best < 0 || logp[i] > logp[static_cast<std::size_t>(best)]) best = id;
    }
    if (best == corpus::kEos) break;
    out.push_back(best);
    st = std::move(next);
    prev = best;
  }
  return out;
}

template <class T>
TokenIds beam_decode(const Model<T>& model, const EncodedExample& input, std::size_t beam_size, std::size_t max_len) {
  DecodeSession<T> session(model, input);
  BeamOptions opt;
  opt.beam_size = beam_size;
  opt.max_len = max_len;
  opt.bos = corpus::kBos;
  opt.eos = corpus::kEos;
  opt.banned = {corpus::kPad, corpus::kBos};
  return beam_search(session.start(), [&](const DecoderState& st, std::int32_t prev) { return session.step(st, prev); },
                     opt)
      .tokens;
}

// Teacher-forces the model along its own output to obtain the attention
// rows behind that output.
template <class T>
AttentionTrace trace_output(const Model<T>& model, EncodedExample input, const TokenIds& output) {
  if (output.empty()) throw Error("models", "cannot trace an empty output");
  input.tgt = output;
  return forward_teacher_forced(model, input).trace;
}

}  // namespace howsumm::models
