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

#include <span>
#include <string>
#include <vector>

#include "howsumm/common.hpp"
#include "howsumm/numcore/param_store.hpp"
#include "howsumm/numcore/tape.hpp"

namespace howsumm::numcore {

inline constexpr double kInitScale = 0.08;

// ---------------------------------------------------------------------------
// GRU
//
//   z  = sigmoid(W_z x + U_z h_prev + b_z)
//   r  = sigmoid(W_r x + U_r h_prev + b_r)
//   h~ = tanh(W_h x + U_h (r * h_prev) + b_h)
//   h  = (1 - z) * h_prev + z * h~
// ---------------------------------------------------------------------------

template <class T>
void add_gru_params(ParamStore<T>& store, const std::string& prefix, std::size_t d_in, std::size_t d_h, Rng& rng,
                    double scale = kInitScale) {
  for (const char* gate : {"z", "r", "h"}) {
    store.add_uniform(prefix + ".W_" + gate, {d_h, d_in}, rng, scale);
    store.add_uniform(prefix + ".U_" + gate, {d_h, d_h}, rng, scale);
    store.add_zeros(prefix + ".b_" + gate, {d_h});
  }
}

inline std::size_t gru_param_count(std::size_t d_in, std::size_t d_h) { return 3 * (d_h * d_in + d_h * d_h + d_h); }

namespace detail {

template <class T>
void expect_shape(const Tape<T>& tape, const std::string& name, const Shape& want) {
  const auto& got = tape.store()->value(name).shape();
  if (got != want)
    throw Error("numcore", "parameter '" + name + "' has shape " + shape_string(got) + ", expected " +
                               shape_string(want));
}

}  // namespace detail

template <class T>
Var gru_cell(Tape<T>& tape, const std::string& prefix, Var x, Var h_prev) {
  const std::size_t d_in = tape.value(x).size();
  const std::size_t d_h = tape.value(h_prev).size();
  for (const char* gate : {"z", "r", "h"}) {
    detail::expect_shape(tape, prefix + ".W_" + gate, {d_h, d_in});
    detail::expect_shape(tape, prefix + ".U_" + gate, {d_h, d_h});
    detail::expect_shape(tape, prefix + ".b_" + gate, {d_h});
  }
  auto p = [&](const char* n) { return tape.param(prefix + "." + n); };
  const Var z = tape.sigmoid(tape.add(tape.matvec(p("W_z"), x), tape.matvec(p("U_z"), h_prev), p("b_z")));
  const Var r = tape.sigmoid(tape.add(tape.matvec(p("W_r"), x), tape.matvec(p("U_r"), h_prev), p("b_r")));
  const Var cand =
      tape.tanh(tape.add(tape.matvec(p("W_h"), x), tape.matvec(p("U_h"), tape.mul(r, h_prev)), p("b_h")));
  return tape.add(tape.mul(tape.one_minus(z), h_prev), tape.mul(z, cand));
}

// Bidirectional multi-layer GRU. Each output is forward || backward state;
// layer k reads layer k-1's outputs. Parameters live under
// <prefix>.l<k>.fwd / .bwd.
template <class T>
void add_bigru_params(ParamStore<T>& store, const std::string& prefix, std::size_t d_in, std::size_t d_h,
                      std::size_t layers, Rng& rng, double scale = kInitScale) {
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = l == 0 ? d_in : 2 * d_h;
    add_gru_params(store, prefix + ".l" + std::to_string(l) + ".fwd", in, d_h, rng, scale);
    add_gru_params(store, prefix + ".l" + std::to_string(l) + ".bwd", in, d_h, rng, scale);
  }
}

template <class T>
std::vector<Var> run_bigru(Tape<T>& tape, const std::string& prefix, std::span<const Var> seq, std::size_t layers,
                           std::size_t d_h) {
  if (seq.empty()) throw Error("numcore", "run_bigru on an empty sequence");
  if (layers < 1) throw Error("numcore", "run_bigru needs at least one layer");
  std::vector<Var> input(seq.begin(), seq.end());
  const std::size_t n = input.size();
  for (std::size_t l = 0; l < layers; ++l) {
    const std::string base = prefix + ".l" + std::to_string(l);
    std::vector<Var> fwd(n), bwd(n);
    Var h = tape.constant(Array<T>::zeros(d_h));
    for (std::size_t i = 0; i < n; ++i) fwd[i] = h = gru_cell(tape, base + ".fwd", input[i], h);
    h = tape.constant(Array<T>::zeros(d_h));
    for (std::size_t i = n; i-- > 0;) bwd[i] = h = gru_cell(tape, base + ".bwd", input[i], h);
    for (std::size_t i = 0; i < n; ++i) input[i] = tape.concat(fwd[i], bwd[i]);
  }
  return input;
}

// ---------------------------------------------------------------------------
// Additive attention: e_i = v . tanh(W s + U m_i + b), weights = softmax(e),
// context = sum_i weights_i m_i.
// ---------------------------------------------------------------------------

template <class T>
void add_attention_params(ParamStore<T>& store, const std::string& prefix, std::size_t d_state, std::size_t d_mem,
                          std::size_t d_att, Rng& rng, double scale = kInitScale) {
  store.add_uniform(prefix + ".W", {d_att, d_state}, rng, scale);
  store.add_uniform(prefix + ".U", {d_att, d_mem}, rng, scale);
  store.add_uniform(prefix + ".b", {d_att}, rng, scale);
  store.add_uniform(prefix + ".v", {d_att}, rng, scale);
}

inline std::size_t attention_param_count(std::size_t d_state, std::size_t d_mem, std::size_t d_att) {
  return d_att * d_state + d_att * d_mem + 2 * d_att;
}

// Memory items with their projected keys U m_i, computed once per sequence.
struct AttentionMemory {
  std::vector<Var> items;
  std::vector<Var> keys;
};

template <class T>
AttentionMemory prepare_memory(Tape<T>& tape, const std::string& prefix, std::span<const Var> items) {
  if (items.empty()) throw Error("numcore", "attention over an empty memory");
  detail::expect_shape(tape, prefix + ".U",
                       {tape.store()->value(prefix + ".U").rows(), tape.value(items[0]).size()});
  AttentionMemory mem;
  mem.items.assign(items.begin(), items.end());
  const Var u = tape.param(prefix + ".U");
  for (const auto m : items) mem.keys.push_back(tape.matvec(u, m));
  return mem;
}

struct Attended {
  Var weights;
  Var context;
};

template <class T>
Attended attend(Tape<T>& tape, const std::string& prefix, Var state, const AttentionMemory& mem) {
  if (mem.items.empty()) throw Error("numcore", "attention over an empty memory");
  const Var query = tape.add(tape.matvec(tape.param(prefix + ".W"), state), tape.param(prefix + ".b"));
  const Var v = tape.param(prefix + ".v");
  std::vector<Var> energies;
  energies.reserve(mem.keys.size());
  for (const auto k : mem.keys) energies.push_back(tape.dot(v, tape.tanh(tape.add(query, k))));
  const Var weights = tape.softmax(tape.stack(energies));
  return {weights, tape.weighted_sum(weights, mem.items)};
}

template <class T>
Attended attend(Tape<T>& tape, const std::string& prefix, Var state, std::span<const Var> memory) {
  return attend(tape, prefix, state, prepare_memory(tape, prefix, memory));
}

// ---------------------------------------------------------------------------
// Conditional GRU: s' = GRU_1(y, s_prev); attend(s', memory);
// s_new = GRU_2(context, s'). Parameters under <prefix>.gru1 / .gru2 / .att.
// ---------------------------------------------------------------------------

struct CgruOutput {
  Var state;
  Var context;
  Var weights;
};

template <class T>
CgruOutput cgru_step(Tape<T>& tape, const std::string& prefix, Var y_emb, Var s_prev, const AttentionMemory& mem) {
  const Var s1 = gru_cell(tape, prefix + ".gru1", y_emb, s_prev);
  const auto att = attend(tape, prefix + ".att", s1, mem);
  const Var s2 = gru_cell(tape, prefix + ".gru2", att.context, s1);
  return {s2, att.context, att.weights};
}

template <class T>
void add_cgru_params(ParamStore<T>& store, const std::string& prefix, std::size_t d_emb, std::size_t d_h,
                     std::size_t d_mem, Rng& rng, double scale = kInitScale) {
  add_gru_params(store, prefix + ".gru1", d_emb, d_h, rng, scale);
  add_attention_params(store, prefix + ".att", d_h, d_mem, d_h, rng, scale);
  add_gru_params(store, prefix + ".gru2", d_mem, d_h, rng, scale);
}

// ---------------------------------------------------------------------------
// Hierarchical fusion over per-modality contexts:
//   e_k = v . tanh(W s + U_k c_k + b), betas = softmax(e),
//   fused = sum_k betas_k P_k c_k
// Modality k uses <prefix>.U<k> and <prefix>.P<k>.
// ---------------------------------------------------------------------------

template <class T>
void add_fusion_params(ParamStore<T>& store, const std::string& prefix, std::size_t d_state,
                       std::span<const std::size_t> context_dims, std::size_t d_out, std::size_t d_att, Rng& rng,
                       double scale = kInitScale) {
  store.add_uniform(prefix + ".W", {d_att, d_state}, rng, scale);
  store.add_uniform(prefix + ".b", {d_att}, rng, scale);
  store.add_uniform(prefix + ".v", {d_att}, rng, scale);
  for (std::size_t k = 0; k < context_dims.size(); ++k) {
    store.add_uniform(prefix + ".U" + std::to_string(k), {d_att, context_dims[k]}, rng, scale);
    store.add_uniform(prefix + ".P" + std::to_string(k), {d_out, context_dims[k]}, rng, scale);
  }
}

struct Fused {
  Var fused;
  Var betas;
};

template <class T>
Fused hier_fuse(Tape<T>& tape, const std::string& prefix, Var state, std::span<const Var> contexts) {
  if (contexts.empty()) throw Error("numcore", "hier_fuse needs at least one modality");
  const Var query = tape.add(tape.matvec(tape.param(prefix + ".W"), state), tape.param(prefix + ".b"));
  const Var v = tape.param(prefix + ".v");
  std::vector<Var> energies, projected;
  for (std::size_t k = 0; k < contexts.size(); ++k) {
    const auto key = prefix + ".U" + std::to_string(k);
    if (!tape.store()->contains(key))
      throw Error("numcore", "hier_fuse has no parameters for modality " + std::to_string(k));
    energies.push_back(tape.dot(v, tape.tanh(tape.add(query, tape.matvec(tape.param(key), contexts[k])))));
    projected.push_back(tape.matvec(tape.param(prefix + ".P" + std::to_string(k)), contexts[k]));
  }
  const Var betas = tape.softmax(tape.stack(energies));
  return {tape.weighted_sum(betas, projected), betas};
}

}  // namespace howsumm::numcore
