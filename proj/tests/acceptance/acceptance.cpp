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


// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. Pass criterion numbers as arguments
// to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "howsumm/howsumm.hpp"
#include "../support/oracles.hpp"
#include "../support/synth.hpp"

namespace {

using namespace howsumm;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Tokens T(const char* s) { return split_whitespace(s); }

// ---- 1: gradients -------------------------------------------------------------

models::EncodedExample grad_example(Rng& rng, std::size_t vocab, bool video) {
  models::EncodedExample ex;
  ex.id = "g";
  const std::size_t n_src = 3 + rng.below(3), n_tgt = 2 + rng.below(2);
  for (std::size_t i = 0; i < n_src; ++i) ex.src.push_back(static_cast<std::int32_t>(4 + rng.below(vocab - 4)));
  for (std::size_t i = 0; i < n_tgt; ++i) ex.tgt.push_back(static_cast<std::int32_t>(4 + rng.below(vocab - 4)));
  if (video) ex.features = testing::action_features(rng, rng.below(2) == 1, 3 + rng.below(2), 4);
  return ex;
}

Outcome gradient_soundness() {
  using models::Variant;
  Outcome o{true, ""};
  for (const auto v : {Variant::kTextOnly, Variant::kVideoProj, Variant::kVideoRnn, Variant::kHierarchical}) {
    models::ModelConfig cfg;
    cfg.variant = v;
    cfg.d_h = 6;
    cfg.embed_dim = 6;
    cfg.d_v = models::uses_video(v) ? 4 : 0;
    cfg.init_scale = 0.3;
    auto m = models::build_model<double>(cfg, 20, 20);
    Rng rng(17);
    const std::vector<models::EncodedExample> batch = {grad_example(rng, 20, models::uses_video(v)),
                                                       grad_example(rng, 20, models::uses_video(v))};
    const numcore::LossBuilder<double> build = [&](numcore::Tape<double>& tape) {
      std::vector<numcore::Var> losses;
      for (const auto& ex : batch) losses.push_back(models::teacher_forced_loss(tape, m, ex));
      return tape.mean(std::span<const numcore::Var>(losses));
    };
    const auto r = numcore::grad_check(build, m.params);
    o.pass = o.pass && r.max_rel_error < 1e-4;
    o.detail += fmt("%s %.2e over %zu coords (worst %s); ", models::to_string(v).c_str(), r.max_rel_error, r.checked,
                    r.worst_param.c_str());
  }
  return o;
}

// ---- 2: ROUGE-L -----------------------------------------------------------------

Outcome rouge_oracle() {
  const Tokens alpha = T("a b c");
  std::size_t pairs = 0, bad = 0;
  // Every pair with both lengths <= 6.
  const auto short_seqs = oracle::all_sequences(alpha, 0, 6);
  for (const auto& a : short_seqs)
    for (const auto& b : short_seqs) {
      ++pairs;
      bad += eval::lcs_length(a, b) != oracle::lcs_subsets(a, b);
    }
  // Every pair of lengths <= 10 whose combined length is <= 10.
  std::vector<std::vector<Tokens>> by_len(11);
  for (auto& s : oracle::all_sequences(alpha, 0, 10)) by_len[s.size()].push_back(std::move(s));
  for (std::size_t la = 0; la <= 10; ++la)
    for (std::size_t lb = 0; la + lb <= 10; ++lb) {
      if (la <= 6 && lb <= 6) continue;
      for (const auto& a : by_len[la])
        for (const auto& b : by_len[lb]) {
          ++pairs;
          bad += eval::lcs_length(a, b) != oracle::lcs_recursive(a, b);
        }
    }
  // Random pairs with lengths 7..10 on both sides.
  std::mt19937 gen(2);
  for (int n = 0; n < 100000; ++n) {
    Tokens a(7 + gen() % 4), b(7 + gen() % 4);
    for (auto& t : a) t = alpha[gen() % 3];
    for (auto& t : b) t = alpha[gen() % 3];
    ++pairs;
    bad += eval::lcs_length(a, b) != oracle::lcs_subsets(a, b);
  }
  const auto w = eval::rouge_l(T("a b c d"), T("a c d e"));
  const bool worked = w.p == 0.75 && w.r == 0.75 && w.f == 0.75;
  return {bad == 0 && worked, fmt("%zu pairs, %zu disagreements; worked example P=%.2f R=%.2f F=%.2f", pairs, bad, w.p,
                                  w.r, w.f)};
}

// ---- 3: Content F1 ------------------------------------------------------------------

Outcome content_f1_golden() {
  auto stop = eval::function_word_stopset();
  stop.task_words = {"learn", "expert"};
  const auto ref = T("learn how to cut peppers from an expert chef");
  const double full = eval::content_f1(T("learn to cut the peppers with a chef"), ref, stop).f;
  const double partial = eval::content_f1(T("learn to chop the peppers with a chef"), ref, stop).f;
  const Tokens content = T("cut cutting peppers pepper chef onion onions garlic knife peel");
  std::vector<std::string> stops(eval::kFunctionWords.begin(), eval::kFunctionWords.end());
  stops.push_back("learn");
  stops.push_back("expert");
  std::mt19937 gen(3);
  std::size_t broken = 0;
  for (int n = 0; n < 200; ++n) {
    Tokens h(gen() % 7), r(1 + gen() % 7);
    for (auto& t : h) t = content[gen() % content.size()];
    for (auto& t : r) t = content[gen() % content.size()];
    const auto base = eval::content_f1(h, r, stop);
    for (int k = 0, extra = 1 + static_cast<int>(gen() % 5); k < extra; ++k) {
      h.insert(h.begin() + static_cast<std::ptrdiff_t>(gen() % (h.size() + 1)), stops[gen() % stops.size()]);
      r.insert(r.begin() + static_cast<std::ptrdiff_t>(gen() % (r.size() + 1)), stops[gen() % stops.size()]);
    }
    const auto noisy = eval::content_f1(h, r, stop);
    broken += base.p != noisy.p || base.r != noisy.r || base.f != noisy.f;
  }
  const bool ok = full == 1.0 && std::abs(partial - 2.0 / 3.0) < 1e-9 && broken == 0;
  return {ok, fmt("full=%.9f partial=%.9f; stop-word insertion changed %zu/200 scores", full, partial, broken)};
}

// ---- 4: aligner -----------------------------------------------------------------------

Outcome aligner_exhaustive() {
  const Tokens words = T("cut cutting pepper peppers the");
  const auto seqs = oracle::all_sequences(words, 0, 6);
  std::size_t pairs = 0, bad = 0;
  // Every pair with both lengths <= 4 or combined length <= 7.
  for (const auto& h : seqs)
    for (const auto& r : seqs) {
      if (!((h.size() <= 4 && r.size() <= 4) || h.size() + r.size() <= 7)) continue;
      ++pairs;
      bad += eval::align(h, r) != oracle::align_exhaustive(h, r);
    }
  std::mt19937 gen(4);
  for (int n = 0; n < 3000; ++n) {
    Tokens h(gen() % 7), r(gen() % 7);
    for (auto& t : h) t = words[gen() % words.size()];
    for (auto& t : r) t = words[gen() % words.size()];
    ++pairs;
    bad += eval::align(h, r) != oracle::align_exhaustive(h, r);
  }
  return {bad == 0, fmt("%zu pairs (all with both lengths <=4 or |hyp|+|ref|<=7, random up to 6x6), %zu disagreements", pairs, bad)};
}

// ---- shared toy training --------------------------------------------------------------

models::ModelConfig toy_model(models::Variant v, std::size_t d_v = 0) {
  models::ModelConfig cfg;
  cfg.variant = v;
  cfg.d_h = 16;
  cfg.embed_dim = 16;
  cfg.enc_layers = 1;
  cfg.dec_layers = 1;
  cfg.d_v = d_v;
  cfg.init_scale = 0.3;
  return cfg;
}

double macro_rouge(const std::vector<Tokens>& hyps, const std::vector<Tokens>& refs) {
  return eval::evaluate_lines(hyps, refs, eval::function_word_stopset()).macro_rouge_l.f;
}

struct Overfit {
  corpus::Split pairs;
  corpus::Vocabulary vocab;
  models::Model<double> model;
  double loss = 0.0;
  std::size_t epochs = 0;
};

const Overfit& overfit_model() {
  static const Overfit fit = [] {
    Overfit f;
    f.pairs = testing::recipe_corpus(11).split("train");
    f.pairs.resize(50);
    corpus::Corpus c;
    c.splits["train"] = f.pairs;
    c.splits["val"] = f.pairs;
    f.vocab = corpus::build_vocab(f.pairs, 1000);
    f.model = models::build_model<double>(toy_model(models::Variant::kTextOnly), f.vocab.size(), f.vocab.size());
    models::TrainSchedule s;
    s.lr = 0.01;
    s.max_epochs = 300;
    s.batch_size = 10;
    s.stop_below_train_loss = 0.02;
    f.epochs = models::train(f.model, c, f.vocab, f.vocab, s).epochs.size();
    f.loss = models::mean_loss(f.model, models::encode_split(f.pairs, f.vocab, f.vocab, 600));
    return f;
  }();
  return fit;
}

std::vector<Tokens> decode_pairs(const Overfit& f, double wer) {
  std::vector<Tokens> hyps(f.pairs.size());
  for (std::size_t i = 0; i < f.pairs.size(); ++i) {
    auto ex = f.pairs[i];
    if (wer > 0.0) {
      corpus::CorruptionSpec spec;
      spec.target_wer = wer;
      spec.seed = 100 + i;
      ex.transcript = corpus::corrupt_to_wer(ex.transcript, spec, f.vocab);
    }
    hyps[i] = f.vocab.decode(models::greedy_decode(f.model, models::encode_example(ex, f.vocab, f.vocab, 600), 10));
  }
  return hyps;
}

// ---- 5: overfit ---------------------------------------------------------------------

Outcome overfit() {
  const auto& f = overfit_model();
  const auto hyps = decode_pairs(f, 0.0);
  std::size_t exact = 0;
  for (std::size_t i = 0; i < hyps.size(); ++i) exact += hyps[i] == f.pairs[i].summary;
  return {f.loss < 0.05 && exact >= 48 && f.epochs <= 300,
          fmt("loss %.4f after %zu epochs, %zu/50 exact under greedy decode", f.loss, f.epochs, exact)};
}

// ---- 9: noise degradation ---------------------------------------------------------------

Outcome noise_degradation() {
  const auto& f = overfit_model();
  std::vector<Tokens> refs;
  for (const auto& ex : f.pairs) refs.push_back(ex.summary);
  const double clean = macro_rouge(decode_pairs(f, 0.0), refs);
  const double noisy = macro_rouge(decode_pairs(f, 0.35), refs);
  return {noisy < clean, fmt("ROUGE-L F clean %.4f, WER 0.35 %.4f", clean, noisy)};
}

// ---- 6: multimodal advantage ---------------------------------------------------------------

double verb_accuracy(models::Variant v, const corpus::Corpus& c) {
  const auto vocab = corpus::build_vocab(c.split("train"), 1000);
  auto m = models::build_model<double>(toy_model(v, models::uses_video(v) ? c.feature_dim : 0), vocab.size(),
                                       vocab.size());
  models::TrainSchedule s;
  s.lr = 0.01;
  s.max_epochs = 30;
  s.batch_size = 10;
  models::train(m, c, vocab, vocab, s);
  const auto& test = c.split("test");
  std::vector<int> hit(test.size(), 0);
  parallel_for(test.size(), [&](std::size_t i) {
    const auto out = vocab.decode(models::greedy_decode(m, models::encode_example(test[i], vocab, vocab, 600), 5));
    hit[i] = !out.empty() && out[0] == test[i].summary[0];
  });
  double n = 0;
  for (const int h : hit) n += h;
  return n / static_cast<double>(test.size());
}

Outcome multimodal_advantage() {
  bool ok = true;
  std::string detail;
  for (const std::uint64_t seed : {1, 2, 3}) {
    auto c = testing::video_corpus(seed, 200, 1000);
    c.splits["val"].resize(100);
    const double hier = verb_accuracy(models::Variant::kHierarchical, c);
    const double text = verb_accuracy(models::Variant::kTextOnly, c);
    ok = ok && hier == 1.0 && std::abs(text - 0.5) <= 0.05;
    detail += fmt("seed %d: hierarchical %.3f, text-only %.3f; ", static_cast<int>(seed), hier, text);
  }
  return {ok, detail + "majority rate 0.500"};
}

// ---- 7: schedule ---------------------------------------------------------------------------

Outcome schedule_conformance() {
  auto c = testing::recipe_corpus(1);
  c.splits["train"].resize(4);
  c.splits["val"].resize(2);
  const auto vocab = corpus::build_vocab(c.split("train"), 1000);
  auto m = models::build_model<double>(toy_model(models::Variant::kTextOnly), vocab.size(), vocab.size());
  models::TrainSchedule s;
  s.lr = 4e-4;
  s.max_epochs = 6;
  const std::vector<double> stub = {2.0, 1.5, 1.6, 1.4, 1.5, 1.5};
  models::TrainHooks hooks;
  hooks.val_loss = [&](std::size_t epoch, double) { return stub[epoch - 1]; };
  const auto log = models::train(m, c, vocab, vocab, s, hooks);
  const double lr = s.lr;
  const std::vector<double> expected = {lr, lr, lr / 2, lr / 2, lr / 4, lr / 8};
  std::vector<double> trace;
  for (const auto& e : log.epochs) trace.push_back(e.lr);
  std::string shown;
  for (const double x : trace) shown += fmt("%g ", x);
  return {trace == expected, "lr trace " + shown};
}

// ---- 8: corruption calibration ---------------------------------------------------------------

Outcome corruption_calibration() {
  std::vector<Tokens> docs(1);
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) docs[0].push_back("w" + std::to_string(rng.below(300)));
  const auto vocab = corpus::build_vocab_from(docs, 1000);
  double lo = 1.0, hi = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    corpus::CorruptionSpec spec;
    spec.target_wer = 0.354;
    spec.seed = seed;
    const double w = corpus::word_error_rate(corpus::corrupt_to_wer(docs[0], spec, vocab), docs[0]);
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  return {lo >= 0.334 && hi <= 0.374, fmt("WER over 20 seeds in [%.3f, %.3f], target 0.354 +/- 0.02", lo, hi)};
}

// ---- 10: determinism ------------------------------------------------------------------------

int cli_call(std::vector<std::string> args) {
  args.insert(args.begin(), "howsumm");
  std::ostringstream out, err;
  const int rc = cli::run(args, out, err);
  if (rc != 0) std::fprintf(stderr, "%s", err.str().c_str());
  return rc;
}

Outcome determinism() {
  const auto dir = testing::scratch_dir("acceptance_determinism");
  testing::write_corpus(testing::recipe_corpus(4), dir / "data");
  atomic_write(dir / "run.cfg",
               "manifest=data/manifest.txt\nd_h=16\nembed_dim=16\nenc_layers=1\ndec_layers=1\ninit_scale=0.3\n"
               "lr=0.01\nmax_epochs=8\nbatch_size=10\nbeam=3\nmax_len=10\n");
  const auto cfg = (dir / "run.cfg").string();
  for (const char* run : {"a", "b"}) {
    const auto out = (dir / run).string();
    if (cli_call({"train", "--config", cfg, "--out", out}) != 0 || cli_call({"decode", "--config", cfg, "--out", out}) ||
        cli_call({"evaluate", "--config", cfg, "--out", out, "--hyp", out + "/test.hyp", "--ref", out + "/test.ref"}))
      return {false, "pipeline run failed"};
  }
  std::string differing;
  for (const char* f : {"test.hyp", "report.tsv", "model.psto", "train_log.tsv"})
    if (read_file(dir / "a" / f, "acceptance") != read_file(dir / "b" / f, "acceptance")) differing += std::string(f) + " ";
  return {differing.empty(), differing.empty() ? "test.hyp, report.tsv, model.psto and train_log.tsv byte-identical"
                                               : "differ: " + differing};
}

// ---- 11: baseline ordering ----------------------------------------------------------------

Outcome baseline_ordering() {
  bool ok = true;
  std::string detail;
  for (const std::uint64_t seed : {1, 2, 3}) {
    const auto c = testing::recipe_corpus(seed, 2);
    const auto& train = c.split("train");
    const auto& test = c.split("test");
    std::vector<Tokens> refs, summaries;
    for (const auto& ex : test) refs.push_back(ex.summary);
    for (const auto& ex : train) summaries.push_back(ex.summary);

    const auto vocab = corpus::build_vocab(train, 1000);
    auto m = models::build_model<double>(toy_model(models::Variant::kTextOnly), vocab.size(), vocab.size());
    models::TrainSchedule s;
    s.lr = 0.01;
    s.max_epochs = 30;
    s.batch_size = 10;
    s.seed = seed;
    models::train(m, c, vocab, vocab, s);
    std::vector<Tokens> model_hyps(test.size()), nn_hyps(test.size()), lm_hyps(test.size());
    const auto index = baselines::build_transcript_index(train);
    const auto lm = baselines::train_ngram_lm(summaries, 3, 0.01);
    for (std::size_t i = 0; i < test.size(); ++i) {
      model_hyps[i] = vocab.decode(models::beam_decode(m, models::encode_example(test[i], vocab, vocab, 600), 5, 10));
      nn_hyps[i] = baselines::nearest_neighbor_summary(test[i].transcript, index, train);
      lm_hyps[i] = baselines::sample_lm(lm, seed + i, 50);
    }
    const double model = macro_rouge(model_hyps, refs), nn = macro_rouge(nn_hyps, refs), rnd = macro_rouge(lm_hyps, refs);
    ok = ok && model > nn && nn > rnd;
    detail += fmt("seed %d: text-only %.3f > neighbor %.3f > random-lm %.3f; ", static_cast<int>(seed), model, nn, rnd);
  }
  return {ok, detail};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "gradient soundness", gradient_soundness},
      {2, "ROUGE-L oracle equivalence", rouge_oracle},
      {3, "Content F1 golden set", content_f1_golden},
      {4, "aligner vs exhaustive enumeration", aligner_exhaustive},
      {5, "overfit 50 pairs", overfit},
      {6, "multimodal advantage", multimodal_advantage},
      {7, "schedule conformance", schedule_conformance},
      {8, "corruption calibration", corruption_calibration},
      {9, "noise degradation", noise_degradation},
      {10, "determinism", determinism},
      {11, "baseline ordering", baseline_ordering},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    while (!o.detail.empty() && (o.detail.back() == ' ' || o.detail.back() == ';')) o.detail.pop_back();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %2d %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
