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

#include "howsumm/numcore/adam.hpp"
#include "howsumm/numcore/checkpoint.hpp"
#include "howsumm/numcore/grad_check.hpp"
#include "howsumm/numcore/layers.hpp"
#include "howsumm/numcore/param_store.hpp"
#include "howsumm/numcore/tape.hpp"
#include "../support/oracles.hpp"
#include "../support/synth.hpp"

namespace howsumm::numcore {
namespace {

using oracle::Vec;

Vec random_vec(Rng& rng, std::size_t n, double scale = 1.0) {
  Vec v(n);
  for (auto& x : v) x = rng.uniform(-scale, scale);
  return v;
}

Vec values(const Tape<double>& tape, Var v) {
  const auto& a = tape.value(v);
  return Vec(a.storage().begin(), a.storage().end());
}

void expect_near(const Vec& a, const Vec& b, double tol = 1e-12) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol) << "index " << i;
}

Var constant(Tape<double>& tape, const Vec& v) { return tape.constant(Array<double>::vector(v)); }

TEST(Gru, ZeroParamsKeepHalfway) {
  ParamStore<double> s;
  Rng rng(1);
  add_gru_params(s, "g", 3, 2, rng, 0.0);
  Tape<double> tape(&s, false);
  // z = 0.5 and h~ = 0, so h = 0.5 * h_prev.
  const auto h = gru_cell(tape, "g", constant(tape, {1, 2, 3}), constant(tape, {0.4, -0.8}));
  expect_near(values(tape, h), {0.2, -0.4});
  const auto h0 = gru_cell(tape, "g", constant(tape, {1, 2, 3}), constant(tape, {0, 0}));
  expect_near(values(tape, h0), {0, 0});
}

TEST(Gru, MatchesScalarOracle) {
  ParamStore<double> s;
  Rng rng(2);
  add_gru_params(s, "g", 4, 3, rng, 0.7);
  for (auto& [n, e] : s.entries())
    if (n.find(".b_") != std::string::npos)
      for (auto& x : e.value.storage()) x = rng.uniform(-0.5, 0.5);
  const auto x = random_vec(rng, 4), h = random_vec(rng, 3);
  Tape<double> tape(&s, false);
  expect_near(values(tape, gru_cell(tape, "g", constant(tape, x), constant(tape, h))), oracle::gru(s, "g", x, h));
}

TEST(Gru, ShapeErrorNamesParameter) {
  ParamStore<double> s;
  Rng rng(2);
  add_gru_params(s, "g", 4, 3, rng);
  Tape<double> tape(&s, false);
  try {
    gru_cell(tape, "g", constant(tape, {1, 2}), constant(tape, {0, 0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("g.W_z"), std::string::npos);
  }
}

TEST(BiGru, ReversalSwapsDirections) {
  ParamStore<double> s;
  Rng rng(3);
  add_bigru_params(s, "enc", 2, 3, 1, rng, 0.6);
  // Tie the directions so that reversing the input mirrors the outputs.
  for (auto& [n, e] : s.entries())
    if (n.find(".fwd.") != std::string::npos) {
      auto bwd = n;
      bwd.replace(bwd.find(".fwd."), 5, ".bwd.");
      s.value(bwd) = e.value;
    }
  std::vector<Vec> seq = {random_vec(rng, 2), random_vec(rng, 2), random_vec(rng, 2)};
  auto run = [&](const std::vector<Vec>& in) {
    Tape<double> tape(&s, false);
    std::vector<Var> vars;
    for (const auto& v : in) vars.push_back(constant(tape, v));
    std::vector<Vec> out;
    for (const auto v : run_bigru(tape, "enc", std::span<const Var>(vars), 1, 3)) out.push_back(values(tape, v));
    return out;
  };
  const auto fwd = run(seq);
  const auto rev = run({seq[2], seq[1], seq[0]});
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_NEAR(fwd[t][i], rev[2 - t][3 + i], 1e-12);
      EXPECT_NEAR(fwd[t][3 + i], rev[2 - t][i], 1e-12);
    }
}

TEST(BiGru, ExplicitDirectionsOnThreeSteps) {
  ParamStore<double> s;
  Rng rng(4);
  add_bigru_params(s, "enc", 2, 2, 1, rng, 0.6);
  std::vector<Vec> seq = {random_vec(rng, 2), random_vec(rng, 2), random_vec(rng, 2)};
  Vec hf = {0, 0}, hb = {0, 0};
  std::vector<Vec> f(3), b(3);
  for (std::size_t t = 0; t < 3; ++t) f[t] = hf = oracle::gru(s, "enc.l0.fwd", seq[t], hf);
  for (std::size_t t = 3; t-- > 0;) b[t] = hb = oracle::gru(s, "enc.l0.bwd", seq[t], hb);
  Tape<double> tape(&s, false);
  std::vector<Var> vars;
  for (const auto& v : seq) vars.push_back(constant(tape, v));
  const auto out = run_bigru(tape, "enc", std::span<const Var>(vars), 1, 2);
  for (std::size_t t = 0; t < 3; ++t) expect_near(values(tape, out[t]), {f[t][0], f[t][1], b[t][0], b[t][1]});
}

TEST(Attention, MatchesScalarOracle) {
  ParamStore<double> s;
  Rng rng(5);
  add_attention_params(s, "att", 3, 4, 5, rng, 0.8);
  const auto state = random_vec(rng, 3);
  std::vector<Vec> mem = {random_vec(rng, 4), random_vec(rng, 4), random_vec(rng, 4)};
  Tape<double> tape(&s, false);
  std::vector<Var> vars;
  for (const auto& m : mem) vars.push_back(constant(tape, m));
  const auto got = attend(tape, "att", constant(tape, state), std::span<const Var>(vars));
  const auto want = oracle::attend(s, "att", state, mem);
  expect_near(values(tape, got.weights), want.weights);
  expect_near(values(tape, got.context), want.context);
  double sum = 0;
  for (const double w : values(tape, got.weights)) sum += w;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Cgru, ComposesGruAttentionGru) {
  ParamStore<double> s;
  Rng rng(6);
  add_cgru_params(s, "dec", 3, 4, 2, rng, 0.7);
  const auto y = random_vec(rng, 3), prev = random_vec(rng, 4);
  std::vector<Vec> mem = {random_vec(rng, 2), random_vec(rng, 2)};
  const auto s1 = oracle::gru(s, "dec.gru1", y, prev);
  const auto att = oracle::attend(s, "dec.att", s1, mem);
  const auto s2 = oracle::gru(s, "dec.gru2", att.context, s1);
  Tape<double> tape(&s, false);
  std::vector<Var> vars;
  for (const auto& m : mem) vars.push_back(constant(tape, m));
  const auto memory = prepare_memory(tape, "dec.att", std::span<const Var>(vars));
  const auto out = cgru_step(tape, "dec", constant(tape, y), constant(tape, prev), memory);
  expect_near(values(tape, out.state), s2);
  expect_near(values(tape, out.context), att.context);
  expect_near(values(tape, out.weights), att.weights);
}

TEST(HierFuse, MatchesScalarOracle) {
  ParamStore<double> s;
  Rng rng(7);
  const std::vector<std::size_t> dims = {3, 2};
  add_fusion_params(s, "fuse", 4, std::span<const std::size_t>(dims), 5, 3, rng, 0.8);
  const auto state = random_vec(rng, 4);
  std::vector<Vec> ctx = {random_vec(rng, 3), random_vec(rng, 2)};
  Tape<double> tape(&s, false);
  std::vector<Var> vars = {constant(tape, ctx[0]), constant(tape, ctx[1])};
  const auto got = hier_fuse(tape, "fuse", constant(tape, state), std::span<const Var>(vars));
  const auto want = oracle::fuse(s, "fuse", state, ctx);
  expect_near(values(tape, got.betas), want.weights);
  expect_near(values(tape, got.fused), want.context);
}

TEST(Tape, SoftmaxAndCrossEntropy) {
  Tape<double> tape(nullptr, false);
  const auto p = tape.softmax(constant(tape, {1, 2, 3}));
  const double z = std::exp(1) + std::exp(2) + std::exp(3);
  expect_near(values(tape, p), {std::exp(1) / z, std::exp(2) / z, std::exp(3) / z});
  const auto ce = tape.cross_entropy(constant(tape, {1, 2, 3}), 0);
  EXPECT_NEAR(tape.scalar(ce), std::log(z) - 1.0, 1e-12);
  // Shift invariance and no overflow at large logits.
  const auto big = tape.cross_entropy(constant(tape, {1001, 1002, 1003}), 0);
  EXPECT_NEAR(tape.scalar(big), std::log(z) - 1.0, 1e-9);
  EXPECT_THROW(tape.cross_entropy(constant(tape, {1, 2}), 2), Error);
}

TEST(Tape, BackwardOnSmallFunctions) {
  ParamStore<double> s;
  s.add("w", Array<double>::vector({3.0}));
  s.add("a", Array<double>::vector({1.0, 2.0}));
  s.add("b", Array<double>::vector({-4.0, 0.5}));
  Tape<double> tape(&s, true);
  const auto w = tape.param("w");
  const auto loss = tape.add(tape.mul(w, w), tape.dot(tape.param("a"), tape.param("b")));
  const auto g = tape.backward(loss);
  EXPECT_DOUBLE_EQ(g.at("w")[0], 6.0);
  EXPECT_DOUBLE_EQ(g.at("a")[0], -4.0);
  EXPECT_DOUBLE_EQ(g.at("a")[1], 0.5);
  EXPECT_DOUBLE_EQ(g.at("b")[0], 1.0);
  EXPECT_DOUBLE_EQ(g.at("b")[1], 2.0);
  EXPECT_THROW(tape.backward(tape.param("a")), Error);
}

TEST(Tape, UnusedParametersGetZeroGradient) {
  ParamStore<double> s;
  s.add("w", Array<double>::vector({3.0}));
  s.add("unused", Array<double>::vector({1.0, 1.0}));
  Tape<double> tape(&s, true);
  const auto g = tape.backward(tape.mul(tape.param("w"), tape.param("w")));
  ASSERT_TRUE(g.count("unused"));
  EXPECT_EQ(g.at("unused")[0], 0.0);
}

TEST(Adam, FirstStepMatchesHandEvaluation) {
  ParamStore<double> s;
  s.add("w", Array<double>::vector({1.0}));
  GradMap<double> g;
  g.emplace("w", Array<double>::vector({0.2}));
  AdamHyper h;
  adam_step(s, g, h);
  EXPECT_NEAR(s.value("w")[0] - 1.0, -4e-4 * 0.2 / (0.2 + 1e-8), 1e-15);
  EXPECT_NEAR(s.value("w")[0] - 1.0, -3.99999998e-4, 1e-10);
  EXPECT_EQ(s.step(), 1u);
}

TEST(Adam, TwoStepsReduceSquare) {
  ParamStore<double> s;
  s.add("w", Array<double>::vector({0.7}));
  AdamHyper h;
  h.lr = 0.1;
  double prev = 0.49;
  for (int i = 0; i < 2; ++i) {
    Tape<double> tape(&s, true);
    const auto w = tape.param("w");
    const auto g = tape.backward(tape.mul(w, w));
    adam_step(s, g, h);
    const double f = s.value("w")[0] * s.value("w")[0];
    EXPECT_LT(f, prev);
    prev = f;
  }
}

TEST(Adam, RejectsShapeMismatch) {
  ParamStore<double> s;
  s.add("w", Array<double>::vector({1.0, 2.0}));
  GradMap<double> g;
  g.emplace("w", Array<double>::vector({0.2}));
  EXPECT_THROW(adam_step(s, g, AdamHyper{}), Error);
}

TEST(GradCheck, QuadraticIsExact) {
  ParamStore<double> s;
  s.add("w", Array<double>::vector({0.3, -1.2, 2.0}));
  const LossBuilder<double> build = [](Tape<double>& t) {
    const auto w = t.param("w");
    return t.dot(w, w);
  };
  GradCheckOptions opt;
  opt.eps = 1e-5;
  EXPECT_LT(grad_check(build, s, opt).max_rel_error, 1e-8);
}

TEST(GradCheck, DetectsCorruptedGradient) {
  ParamStore<double> s;
  s.add("w", Array<double>::vector({0.3, -1.2, 2.0}));
  const LossBuilder<double> build = [](Tape<double>& t) {
    const auto w = t.param("w");
    return t.dot(w, w);
  };
  GradMap<double> analytic;
  {
    Tape<double> tape(&s, true);
    analytic = tape.backward(build(tape));
  }
  analytic.at("w")[1] *= 1.1;
  const auto r = grad_check(build, analytic, s);
  EXPECT_GT(r.max_rel_error, 0.05);
  EXPECT_EQ(r.worst_param, "w");
  EXPECT_EQ(r.worst_index, 1u);
}

TEST(GradCheck, GruStack) {
  ParamStore<double> s;
  Rng rng(8);
  add_bigru_params(s, "enc", 2, 3, 2, rng, 0.5);
  add_attention_params(s, "att", 3, 6, 3, rng, 0.5);
  const std::vector<Vec> seq = {random_vec(rng, 2), random_vec(rng, 2)};
  const auto state = random_vec(rng, 3);
  const LossBuilder<double> build = [&](Tape<double>& t) {
    std::vector<Var> vars;
    for (const auto& v : seq) vars.push_back(constant(t, v));
    const auto out = run_bigru(t, "enc", std::span<const Var>(vars), 2, 3);
    const auto a = attend(t, "att", constant(t, state), std::span<const Var>(out));
    return t.cross_entropy(a.context, 1);
  };
  EXPECT_LT(grad_check(build, s).max_rel_error, 1e-4);
}

TEST(Checkpoint, RoundTripPreservesEverything) {
  ParamStore<double> s;
  Rng rng(9);
  add_gru_params(s, "g", 2, 3, rng, 0.5);
  s.value("g.b_z")[1] = 0.125;
  s.entry("g.W_h").m[0] = 0.5;
  s.entry("g.U_r").v[2] = 0.25;
  s.set_step(17);
  const auto dir = testing::scratch_dir("ckpt");
  save_checkpoint(dir / "a.psto", s);
  const auto back = load_checkpoint<double>(dir / "a.psto");
  EXPECT_EQ(back.step(), 17u);
  ASSERT_EQ(back.names(), s.names());
  for (const auto& n : s.names()) {
    EXPECT_EQ(back.value(n), s.value(n));
    EXPECT_EQ(back.entry(n).m, s.entry(n).m);
    EXPECT_EQ(back.entry(n).v, s.entry(n).v);
  }
  const auto f = load_checkpoint<float>(dir / "a.psto");
  EXPECT_FLOAT_EQ(f.value("g.b_z")[1], 0.125f);
}

TEST(Checkpoint, RejectsCorruptBytes) {
  ParamStore<double> s;
  s.add("w", Array<double>::vector({1.0}));
  auto bytes = encode_checkpoint(s);
  EXPECT_THROW(decode_checkpoint<double>(bytes.substr(0, bytes.size() - 3)), Error);
  bytes[0] = 'X';
  EXPECT_THROW(decode_checkpoint<double>(bytes), Error);
}

TEST(ParamStore, CountAndDuplicates) {
  ParamStore<double> s;
  Rng rng(1);
  add_gru_params(s, "g", 5, 4, rng);
  EXPECT_EQ(s.parameter_count(), gru_param_count(5, 4));
  EXPECT_EQ(gru_param_count(5, 4), 3u * (4 * 5 + 4 * 4 + 4));
  EXPECT_THROW(s.add_zeros("g.b_z", {4}), Error);
}

}  // namespace
}  // namespace howsumm::numcore
