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
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "howsumm/common.hpp"
#include "howsumm/corpus/corpus.hpp"
#include "howsumm/corpus/vocabulary.hpp"
#include "howsumm/models/config.hpp"
#include "howsumm/numcore/layers.hpp"
#include "howsumm/numcore/param_store.hpp"
#include "howsumm/numcore/tape.hpp"

namespace howsumm::models {

using numcore::Array;
using numcore::AttentionMemory;
using numcore::ParamStore;
using numcore::Tape;
using numcore::Var;

// Model-ready example: ids plus optional action features.
struct EncodedExample {
  std::string id;
  TokenIds src;
  TokenIds tgt;  // summary ids without BOS/EOS
  std::optional<corpus::FeatureSequence> features;
};

inline EncodedExample encode_example(const corpus::MultimodalExample& ex, const corpus::Vocabulary& src_vocab,
                                     const corpus::Vocabulary& tgt_vocab, std::size_t src_limit) {
  return {ex.id, src_vocab.encode(corpus::truncate(ex.transcript, src_limit)), tgt_vocab.encode(ex.summary),
          ex.features};
}

inline std::vector<EncodedExample> encode_split(const corpus::Split& split, const corpus::Vocabulary& src_vocab,
                                                const corpus::Vocabulary& tgt_vocab, std::size_t src_limit) {
  std::vector<EncodedExample> out;
  out.reserve(split.size());
  for (const auto& ex : split) out.push_back(encode_example(ex, src_vocab, tgt_vocab, src_limit));
  return out;
}

// Attention rows per decoded position. rows[k][t] is modality k's weight
// vector at output step t; betas[t] holds the modality weights for the
// hierarchical variant.
struct AttentionTrace {
  std::vector<std::string> modalities;
  std::vector<std::vector<std::vector<double>>> rows;
  std::vector<std::vector<double>> betas;
  TokenIds tokens;  // token emitted at each step

  std::size_t steps() const { return tokens.size(); }
};

template <class T>
struct Model {
  ModelConfig config;
  std::size_t src_vocab = 0;
  std::size_t tgt_vocab = 0;
  ParamStore<T> params;

  std::vector<std::string> modalities() const {
    std::vector<std::string> m;
    if (uses_text(config.variant)) m.push_back("text");
    if (uses_video(config.variant)) m.push_back("video");
    return m;
  }
  bool hierarchical() const { return config.variant == Variant::kHierarchical; }

  // Width of the memory items each modality exposes to attention.
  std::size_t memory_dim(const std::string& modality) const {
    if (modality == "video" && config.variant == Variant::kVideoProj) return config.d_h;
    return 2 * config.d_h;
  }
  // Width of the vector fed to the second CGRU transition and the readout.
  std::size_t context_dim() const { return hierarchical() ? config.d_h : memory_dim(modalities().front()); }

  std::string attention_prefix(const std::string& modality) const {
    return hierarchical() ? "dec.cgru.att." + modality : "dec.cgru.att";
  }
};

// Parameters are drawn from one seeded stream in a fixed order, so the same
// config and vocabulary sizes give bit-identical models.
template <class T = double>
Model<T> build_model(const ModelConfig& config, std::size_t src_vocab, std::size_t tgt_vocab) {
  config.validate();
  if (tgt_vocab <= corpus::kNumSpecials) throw Error("models", "target vocabulary has no words");
  if (uses_text(config.variant) && src_vocab <= corpus::kNumSpecials)
    throw Error("models", "source vocabulary has no words");
  Model<T> m;
  m.config = config;
  m.src_vocab = src_vocab;
  m.tgt_vocab = tgt_vocab;
  Rng rng(config.seed);
  auto& p = m.params;
  const double s = config.init_scale;
  const std::size_t E = config.embed_dim, H = config.d_h;

  if (uses_text(config.variant)) {
    p.add_uniform("emb.src", {src_vocab, E}, rng, s);
    numcore::add_bigru_params(p, "enc.text", E, H, config.enc_layers, rng, s);
  }
  if (config.variant == Variant::kVideoProj) {
    p.add_uniform("enc.video.proj.W", {H, config.d_v}, rng, s);
    p.add_uniform("enc.video.proj.b", {H}, rng, s);
  } else if (uses_video(config.variant)) {
    numcore::add_bigru_params(p, "enc.video", config.d_v, H, config.enc_layers, rng, s);
  }

  p.add_uniform("emb.tgt", {tgt_vocab, E}, rng, s);
  const auto mods = m.modalities();
  for (std::size_t k = 0; k < mods.size(); ++k)
    p.add_uniform("dec.init.W" + std::to_string(k), {H, m.memory_dim(mods[k])}, rng, s);
  p.add_uniform("dec.init.b", {H}, rng, s);

  numcore::add_gru_params(p, "dec.cgru.gru1", E, H, rng, s);
  std::vector<std::size_t> ctx_dims;
  for (const auto& mod : mods) {
    numcore::add_attention_params(p, m.attention_prefix(mod), H, m.memory_dim(mod), H, rng, s);
    ctx_dims.push_back(m.memory_dim(mod));
  }
  if (m.hierarchical()) numcore::add_fusion_params(p, "dec.fuse", H, std::span<const std::size_t>(ctx_dims), H, H, rng, s);
  numcore::add_gru_params(p, "dec.cgru.gru2", m.context_dim(), H, rng, s);
  for (std::size_t l = 1; l < config.dec_layers; ++l)
    numcore::add_gru_params(p, "dec.l" + std::to_string(l), H, H, rng, s);

  p.add_uniform("out.W_h", {H, H}, rng, s);
  p.add_uniform("out.W_c", {H, m.context_dim()}, rng, s);
  p.add_uniform("out.W_y", {H, E}, rng, s);
  p.add_uniform("out.b", {H}, rng, s);
  p.add_uniform("out.W", {tgt_vocab, H}, rng, s);
  p.add_uniform("out.b_out", {tgt_vocab}, rng, s);
  return m;
}

template <class T>
struct Encoded {
  std::vector<AttentionMemory> memories;  // one per modality, in Model::modalities() order
  Var init_state;
};

template <class T>
void check_inputs(const Model<T>& model, const EncodedExample& ex) {
  if (uses_text(model.config.variant) && ex.src.empty())
    throw Error("models", "example '" + ex.id + "' has an empty transcript");
  if (uses_video(model.config.variant)) {
    if (!ex.features || ex.features->empty())
      throw Error("models", "missing modality: variant " + to_string(model.config.variant) +
                                " needs action features for example '" + ex.id + "'");
    for (const auto& row : *ex.features)
      if (row.size() != model.config.d_v)
        throw Error("models", "feature dimension " + std::to_string(row.size()) + " does not match d_v " +
                                  std::to_string(model.config.d_v));
  }
}

template <class T>
Encoded<T> encode(Tape<T>& tape, const Model<T>& model, const EncodedExample& ex) {
  check_inputs(model, ex);
  const auto& cfg = model.config;
  const auto mods = model.modalities();
  Encoded<T> enc;
  std::vector<Var> means;
  for (const auto& mod : mods) {
    std::vector<Var> items;
    if (mod == "text") {
      const Var emb = tape.param("emb.src");
      std::vector<Var> seq;
      const std::size_t n = std::min(ex.src.size(), cfg.src_limit);
      for (std::size_t i = 0; i < n; ++i) {
        const auto id = static_cast<std::size_t>(ex.src[i]);
        if (id >= model.src_vocab) throw Error("models", "source id out of range");
        seq.push_back(tape.row(emb, id));
      }
      items = numcore::run_bigru(tape, "enc.text", std::span<const Var>(seq), cfg.enc_layers, cfg.d_h);
    } else {
      std::vector<Var> seq;
      for (const auto& row : *ex.features) seq.push_back(tape.constant(Array<T>::vector(std::vector<T>(row.begin(), row.end()))));
      if (cfg.variant == Variant::kVideoProj) {
        const Var w = tape.param("enc.video.proj.W");
        const Var b = tape.param("enc.video.proj.b");
        for (const auto f : seq) items.push_back(tape.add(tape.matvec(w, f), b));
      } else {
        items = numcore::run_bigru(tape, "enc.video", std::span<const Var>(seq), cfg.enc_layers, cfg.d_h);
      }
    }
    means.push_back(tape.mean(std::span<const Var>(items)));
    enc.memories.push_back(numcore::prepare_memory(tape, model.attention_prefix(mod), std::span<const Var>(items)));
  }
  Var acc = tape.param("dec.init.b");
  for (std::size_t k = 0; k < means.size(); ++k)
    acc = tape.add(acc, tape.matvec(tape.param("dec.init.W" + std::to_string(k)), means[k]));
  enc.init_state = tape.tanh(acc);
  return enc;
}

struct DecoderState {
  Var cgru;
  std::vector<Var> upper;  // plain GRU layers stacked above the CGRU
};

struct StepOutput {
  DecoderState state;
  Var logits;
  std::vector<Var> weights;  // per modality
  std::optional<Var> betas;
};

template <class T>
DecoderState initial_state(Tape<T>& tape, const Model<T>& model, const Encoded<T>& enc) {
  DecoderState st{enc.init_state, {}};
  for (std::size_t l = 1; l < model.config.dec_layers; ++l)
    st.upper.push_back(tape.constant(Array<T>::zeros(model.config.d_h)));
  return st;
}

template <class T>
StepOutput decoder_step(Tape<T>& tape, const Model<T>& model, const Encoded<T>& enc, const DecoderState& st,
                        std::int32_t prev_token) {
  if (prev_token < 0 || static_cast<std::size_t>(prev_token) >= model.tgt_vocab)
    throw Error("models", "target id out of range");
  const Var y = tape.row(tape.param("emb.tgt"), static_cast<std::size_t>(prev_token));
  StepOutput out;
  Var context;
  Var s_new;
  if (!model.hierarchical()) {
    const auto r = numcore::cgru_step(tape, "dec.cgru", y, st.cgru, enc.memories[0]);
    s_new = r.state;
    context = r.context;
    out.weights.push_back(r.weights);
  } else {
    const Var s1 = numcore::gru_cell(tape, "dec.cgru.gru1", y, st.cgru);
    const auto mods = model.modalities();
    std::vector<Var> contexts;
    for (std::size_t k = 0; k < mods.size(); ++k) {
      const auto a = numcore::attend(tape, model.attention_prefix(mods[k]), s1, enc.memories[k]);
      contexts.push_back(a.context);
      out.weights.push_back(a.weights);
    }
    const auto f = numcore::hier_fuse(tape, "dec.fuse", s1, std::span<const Var>(contexts));
    context = f.fused;
    out.betas = f.betas;
    s_new = numcore::gru_cell(tape, "dec.cgru.gru2", context, s1);
  }
  out.state.cgru = s_new;
  Var top = s_new;
  for (std::size_t l = 0; l < st.upper.size(); ++l) {
    top = numcore::gru_cell(tape, "dec.l" + std::to_string(l + 1), top, st.upper[l]);
    out.state.upper.push_back(top);
  }
  const Var hidden = tape.tanh(tape.add(tape.add(tape.matvec(tape.param("out.W_h"), top),
                                                 tape.matvec(tape.param("out.W_c"), context)),
                                        tape.matvec(tape.param("out.W_y"), y), tape.param("out.b")));
  out.logits = tape.add(tape.matvec(tape.param("out.W"), hidden), tape.param("out.b_out"));
  return out;
}

template <class T>
void record_trace(const Tape<T>& tape, const StepOutput& step, std::int32_t token, AttentionTrace& trace) {
  if (trace.rows.size() < step.weights.size()) trace.rows.resize(step.weights.size());
  for (std::size_t k = 0; k < step.weights.size(); ++k) {
    const auto& w = tape.value(step.weights[k]);
    trace.rows[k].emplace_back(w.storage().begin(), w.storage().end());
  }
  if (step.betas) {
    const auto& b = tape.value(*step.betas);
    trace.betas.emplace_back(b.storage().begin(), b.storage().end());
  }
  trace.tokens.push_back(token);
}

// Mean cross-entropy over the summary followed by EOS, with the decoder fed
// the gold previous token. The trace covers the summary tokens (the EOS step
// is not recorded).
template <class T>
Var teacher_forced_loss(Tape<T>& tape, const Model<T>& model, const EncodedExample& ex,
                        AttentionTrace* trace = nullptr) {
  if (ex.tgt.empty()) throw Error("models", "example '" + ex.id + "' has an empty summary");
  const auto enc = encode(tape, model, ex);
  auto st = initial_state(tape, model, enc);
  if (trace) {
    *trace = AttentionTrace{};
    trace->modalities = model.modalities();
  }
  std::vector<Var> losses;
  std::int32_t prev = corpus::kBos;
  for (std::size_t t = 0; t <= ex.tgt.size(); ++t) {
    const std::int32_t gold = t < ex.tgt.size() ? ex.tgt[t] : corpus::kEos;
    if (gold < 0 || static_cast<std::size_t>(gold) >= model.tgt_vocab) throw Error("models", "target id out of range");
    auto step = decoder_step(tape, model, enc, st, prev);
    losses.push_back(tape.cross_entropy(step.logits, static_cast<std::size_t>(gold)));
    if (trace && t < ex.tgt.size()) record_trace(tape, step, gold, *trace);
    st = std::move(step.state);
    prev = gold;
  }
  return tape.mean(std::span<const Var>(losses));
}

struct ForwardResult {
  double loss = 0.0;
  AttentionTrace trace;
};

template <class T>
ForwardResult forward_teacher_forced(const Model<T>& model, const EncodedExample& ex) {
  Tape<T> tape(&model.params, false);
  ForwardResult r;
  r.loss = static_cast<double>(tape.scalar(teacher_forced_loss(tape, model, ex, &r.trace)));
  return r;
}

}  // namespace howsumm::models
