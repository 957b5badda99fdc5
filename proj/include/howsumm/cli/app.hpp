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
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "howsumm/baselines/ngram_lm.hpp"
#include "howsumm/baselines/tfidf.hpp"
#include "howsumm/cli/config.hpp"
#include "howsumm/common.hpp"
#include "howsumm/corpus/corpus.hpp"
#include "howsumm/corpus/corruption.hpp"
#include "howsumm/corpus/text.hpp"
#include "howsumm/eval/content_f1.hpp"
#include "howsumm/eval/report.hpp"
#include "howsumm/models/attention_export.hpp"
#include "howsumm/models/decode.hpp"
#include "howsumm/models/model.hpp"
#include "howsumm/models/train.hpp"
#include "howsumm/numcore/checkpoint.hpp"

namespace howsumm::cli {

namespace fs = std::filesystem;

inline const char* kSrcVocabFile = "vocab.src.txt";
inline const char* kTgtVocabFile = "vocab.tgt.txt";
inline const char* kModelFile = "model.psto";

inline std::string format_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string lines_to_text(const std::vector<Tokens>& lines) {
  std::string out;
  for (const auto& l : lines) out += join(l) + "\n";
  return out;
}

inline corpus::CorruptionSpec corruption_spec(const RunConfig& cfg, double wer, std::uint64_t seed) {
  corpus::CorruptionSpec spec;
  spec.target_wer = wer;
  spec.sub_del_ins_mix = {cfg.corrupt_sub, cfg.corrupt_del, cfg.corrupt_ins};
  spec.seed = seed;
  spec.validate();
  return spec;
}

// Loads the corpus and fills in anything the config leaves to the data.
inline corpus::Corpus load_inputs(RunConfig& cfg) {
  auto c = corpus::load_corpus(cfg.manifest);
  if (models::uses_video(cfg.model.variant)) {
    if (c.feature_dim == 0) throw Error("cli", "variant " + models::to_string(cfg.model.variant) + " needs features");
    if (cfg.model.d_v == 0) cfg.model.d_v = c.feature_dim;
    if (cfg.model.d_v != c.feature_dim)
      throw Error("cli", "d_v=" + std::to_string(cfg.model.d_v) + " but features have dimension " +
                             std::to_string(c.feature_dim));
  }
  cfg.model.validate();
  return c;
}

// Model input for one transcript: optionally the centroid sentence only.
inline Tokens model_source(const RunConfig& cfg, const Tokens& transcript) {
  return cfg.extract_input ? baselines::extract_sentence(transcript) : transcript;
}

inline corpus::Split model_split(const RunConfig& cfg, corpus::Split split) {
  for (auto& ex : split) ex.transcript = model_source(cfg, ex.transcript);
  return split;
}

inline std::pair<corpus::Vocabulary, corpus::Vocabulary> build_vocabs(const RunConfig& cfg,
                                                                      const corpus::Split& train) {
  if (!cfg.separate_vocab) {
    auto v = corpus::build_vocab(train, cfg.model.vocab_cap, corpus::VocabScope::kJoint);
    return {v, v};
  }
  return {corpus::build_vocab(train, cfg.model.vocab_cap, corpus::VocabScope::kSource),
          corpus::build_vocab(train, cfg.model.vocab_cap, corpus::VocabScope::kTarget)};
}

inline corpus::Vocabulary load_vocab(const fs::path& path) {
  if (!fs::exists(path)) throw Error("cli", "missing " + path.string() + " (run train first)");
  return corpus::Vocabulary::parse(read_lines(path, "cli"));
}

template <class T>
models::Model<T> load_model(const RunConfig& cfg, const corpus::Vocabulary& src, const corpus::Vocabulary& tgt) {
  auto model = models::build_model<T>(cfg.model, src.size(), tgt.size());
  const auto path = cfg.out_dir / kModelFile;
  if (!fs::exists(path)) throw Error("cli", "missing " + path.string() + " (run train first)");
  auto loaded = numcore::load_checkpoint<T>(path);
  if (loaded.names() != model.params.names())
    throw Error("cli", "checkpoint parameters do not match the configured model");
  for (const auto& name : loaded.names())
    if (loaded.value(name).shape() != model.params.value(name).shape())
      throw Error("cli", "checkpoint shape mismatch for '" + name + "'");
  model.params = std::move(loaded);
  return model;
}

// ---- subcommands ------------------------------------------------------------

inline void cmd_prepare(RunConfig cfg, std::ostream& out) {
  const auto c = load_inputs(cfg);
  const auto& train = c.split("train");
  const auto [src, tgt] = build_vocabs(cfg, model_split(cfg, train));
  atomic_write(cfg.out_dir / kSrcVocabFile, src.serialize());
  atomic_write(cfg.out_dir / kTgtVocabFile, tgt.serialize());
  std::string stats = "split\texamples\ttranscript_tokens\tsummary_tokens\n";
  for (const auto& [name, split] : c.splits) {
    std::size_t nt = 0, ns = 0;
    for (const auto& ex : split) {
      nt += ex.transcript.size();
      ns += ex.summary.size();
    }
    stats += name + "\t" + std::to_string(split.size()) + "\t" + std::to_string(nt) + "\t" + std::to_string(ns) + "\n";
  }
  atomic_write(cfg.out_dir / "stats.tsv", stats);
  std::vector<Tokens> summaries;
  for (const auto& ex : train) summaries.push_back(ex.summary);
  std::string top = "word\tcount\n";
  for (const auto& [w, n] : corpus::top_frequent_counts(summaries, 20)) top += w + "\t" + std::to_string(n) + "\n";
  atomic_write(cfg.out_dir / "top_words.tsv", top);
  out << "prepared " << train.size() << " training examples, vocab " << src.size() << "/" << tgt.size() << "\n";
}

template <class T>
void cmd_train(RunConfig cfg, std::ostream& out) {
  const auto c = load_inputs(cfg);
  const auto train_split = model_split(cfg, c.split("train"));
  if (!c.has_split("val")) throw Error("cli", "manifest has no val split");
  const auto val_split = model_split(cfg, c.split("val"));
  const auto [src, tgt] = build_vocabs(cfg, train_split);
  auto model = models::build_model<T>(cfg.model, src.size(), tgt.size());
  const auto limit = cfg.model.src_limit;
  const auto log = models::train(model, models::encode_split(train_split, src, tgt, limit),
                                 models::encode_split(val_split, src, tgt, limit), cfg.schedule);
  atomic_write(cfg.out_dir / kSrcVocabFile, src.serialize());
  atomic_write(cfg.out_dir / kTgtVocabFile, tgt.serialize());
  atomic_write(cfg.out_dir / "train_log.tsv", log.to_tsv());
  atomic_write(cfg.out_dir / "config.cfg", serialize_config(cfg));
  numcore::save_checkpoint(cfg.out_dir / kModelFile, model.params);
  out << "trained " << log.epochs.size() << " epochs, " << model.params.parameter_count() << " parameters\n";
}

struct Decoded {
  std::vector<Tokens> hyps;
  std::vector<Tokens> refs;
};

template <class T>
Decoded decode_split(const RunConfig& cfg, const corpus::Corpus& c, const std::string& split_name) {
  const auto src = load_vocab(cfg.out_dir / kSrcVocabFile);
  const auto tgt = load_vocab(cfg.out_dir / kTgtVocabFile);
  const auto model = load_model<T>(cfg, src, tgt);
  const auto& split = c.split(split_name);
  Decoded d;
  d.hyps.resize(split.size());
  for (const auto& ex : split) d.refs.push_back(ex.summary);
  const auto replacement = src.entries();
  const corpus::Vocabulary noise_vocab(replacement);
  parallel_for(split.size(), [&](std::size_t i) {
    auto ex = split[i];
    if (cfg.decode.input_wer > 0.0)
      ex.transcript = corpus::corrupt_to_wer(ex.transcript, corruption_spec(cfg, cfg.decode.input_wer, cfg.seed + i),
                                             noise_vocab);
    ex.transcript = model_source(cfg, ex.transcript);
    const auto input = models::encode_example(ex, src, tgt, cfg.model.src_limit);
    const auto ids = cfg.decode.beam <= 1 ? models::greedy_decode(model, input, cfg.decode.max_len)
                                          : models::beam_decode(model, input, cfg.decode.beam, cfg.decode.max_len);
    d.hyps[i] = tgt.decode(ids);
  });
  return d;
}

template <class T>
void cmd_decode(RunConfig cfg, const std::string& split, std::ostream& out) {
  const auto c = load_inputs(cfg);
  const auto d = decode_split<T>(cfg, c, split);
  const auto hyp_path = cfg.out_dir / (split + ".hyp");
  atomic_write(hyp_path, lines_to_text(d.hyps));
  atomic_write(cfg.out_dir / (split + ".ref"), lines_to_text(d.refs));
  out << "decoded " << d.hyps.size() << " examples to " << hyp_path.string() << "\n";
}

inline void cmd_baseline(RunConfig cfg, const std::string& kind, const std::string& split_name, std::ostream& out) {
  const auto c = load_inputs(cfg);
  const auto& train = c.split("train");
  const auto& split = c.split(split_name);
  std::vector<Tokens> hyps(split.size()), refs;
  for (const auto& ex : split) refs.push_back(ex.summary);
  if (kind == "random-lm") {
    std::vector<Tokens> summaries;
    for (const auto& ex : train) summaries.push_back(ex.summary);
    const auto lm = baselines::train_ngram_lm(summaries, cfg.baseline.lm_order, cfg.baseline.lm_k);
    for (std::size_t i = 0; i < split.size(); ++i)
      hyps[i] = baselines::sample_lm(lm, cfg.seed + i, cfg.baseline.lm_max_len);
  } else if (kind == "extractive") {
    parallel_for(split.size(), [&](std::size_t i) { hyps[i] = baselines::extract_sentence(split[i].transcript); });
  } else if (kind == "neighbor") {
    const auto index = baselines::build_transcript_index(train);
    parallel_for(split.size(), [&](std::size_t i) {
      hyps[i] = baselines::nearest_neighbor_summary(split[i].transcript, index, train);
    });
  } else {
    throw Error("cli", "unknown baseline '" + kind + "'");
  }
  const auto path = cfg.out_dir / ("baseline." + kind + "." + split_name + ".hyp");
  atomic_write(path, lines_to_text(hyps));
  atomic_write(cfg.out_dir / (split_name + ".ref"), lines_to_text(refs));
  out << "wrote " << hyps.size() << " " << kind << " outputs to " << path.string() << "\n";
}

// Stop set: task words derived from the training summaries when a config is
// given, function words only otherwise.
inline eval::StopSet evaluation_stopset(const std::optional<RunConfig>& cfg) {
  if (!cfg) return eval::function_word_stopset();
  const auto c = corpus::load_corpus(cfg->manifest);
  std::vector<Tokens> summaries;
  for (const auto& ex : c.split("train")) summaries.push_back(ex.summary);
  return eval::derive_stopwords(summaries, cfg->metric.stop_top_k, cfg->metric.stop_doc_frac);
}

inline void cmd_evaluate(const std::optional<RunConfig>& cfg, const fs::path& hyp, const fs::path& ref,
                         const fs::path& out_dir, const std::string& name, std::optional<double> beta,
                         std::ostream& out) {
  const auto stop = evaluation_stopset(cfg);
  const double b = beta ? *beta : (cfg ? cfg->metric.beta : 1.0);
  const auto report = eval::evaluate_corpus(hyp, ref, stop, b);
  atomic_write(out_dir / name, report.to_tsv());
  out << "rouge_l_f=" << format_fixed(report.macro_rouge_l.f) << " content_f1=" << format_fixed(report.macro_content_f1.f)
      << " n=" << report.examples.size() << "\n";
}

inline void cmd_corrupt(const RunConfig& cfg, const fs::path& in, double wer, const fs::path& out_dir,
                        std::ostream& out) {
  const auto lines = eval::read_token_lines(in);
  std::vector<Tokens> nonempty;
  for (const auto& l : lines)
    if (!l.empty()) nonempty.push_back(l);
  if (nonempty.empty()) throw Error("cli", "nothing to corrupt in " + in.string());
  const auto vocab = corpus::build_vocab_from(nonempty, std::numeric_limits<std::size_t>::max());
  std::vector<Tokens> noisy(lines.size());
  std::size_t errors = 0, words = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    noisy[i] = corpus::corrupt_to_wer(lines[i], corruption_spec(cfg, wer, cfg.seed + i), vocab);
    errors += corpus::edit_distance(noisy[i], lines[i]);
    words += lines[i].size();
  }
  const auto path = out_dir / in.filename();
  if (fs::exists(path) && fs::equivalent(path, in)) throw Error("cli", "output would overwrite the input");
  atomic_write(path, lines_to_text(noisy));
  out << "wrote " << path.string() << " wer=" << format_fixed(words ? double(errors) / double(words) : 0.0) << "\n";
}

template <class T>
void cmd_attention(RunConfig cfg, const std::string& split_name, std::size_t index, std::ostream& out) {
  const auto c = load_inputs(cfg);
  const auto& split = c.split(split_name);
  if (index >= split.size())
    throw Error("cli", "index " + std::to_string(index) + " out of range for split '" + split_name + "'");
  const auto src = load_vocab(cfg.out_dir / kSrcVocabFile);
  const auto tgt = load_vocab(cfg.out_dir / kTgtVocabFile);
  const auto model = load_model<T>(cfg, src, tgt);
  auto ex = split[index];
  ex.transcript = model_source(cfg, ex.transcript);
  const auto input = models::encode_example(ex, src, tgt, cfg.model.src_limit);
  auto ids = cfg.decode.beam <= 1 ? models::greedy_decode(model, input, cfg.decode.max_len)
                                  : models::beam_decode(model, input, cfg.decode.beam, cfg.decode.max_len);
  if (ids.empty()) ids.push_back(corpus::kEos);  // still report where the model looked
  const auto trace = models::trace_output(model, input, ids);
  const auto path = cfg.out_dir / ("attention." + split_name + "." + std::to_string(index) + ".tsv");
  models::export_attention(trace, tgt, path);
  out << "wrote " << path.string() << "\n";
}

// ---- entry point --------------------------------------------------------------

inline std::string one_line(std::string s) {
  for (auto& ch : s)
    if (ch == '\n' || ch == '\r') ch = ' ';
  return trim(s);
}

// Runs the command line. Returns the process exit code; diagnostics go to
// `err` as a single line.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"howsumm: multimodal how-to video summarization", "howsumm"};
  app.require_subcommand(1);
  app.allow_extras(false);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  auto common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "run configuration (key=value)");
    if (config_required) opt->required();
    sub->add_option("--seed", seed, "override the configured seed");
    sub->add_option("--out", out_dir, "output directory");
  };

  auto* prepare = app.add_subcommand("prepare", "build vocabularies and corpus statistics");
  common(prepare, true);

  auto* train = app.add_subcommand("train", "train a summarization model");
  common(train, true);

  std::string split = "test";
  auto* decode = app.add_subcommand("decode", "decode a split with a trained model");
  common(decode, true);
  decode->add_option("--split", split, "split to decode");
  std::optional<double> decode_wer;
  decode->add_option("--wer", decode_wer, "corrupt transcripts to this word error rate first");

  std::string kind;
  auto* baseline = app.add_subcommand("baseline", "produce baseline outputs");
  common(baseline, true);
  baseline->add_option("kind", kind, "random-lm | extractive | neighbor")
      ->required()
      ->check(CLI::IsMember({"random-lm", "extractive", "neighbor"}));
  baseline->add_option("--split", split, "split to summarize");

  std::string hyp, ref, report_name = "report.tsv";
  std::optional<double> beta;
  auto* evaluate = app.add_subcommand("evaluate", "score hypotheses against references");
  common(evaluate, false);
  evaluate->add_option("--hyp", hyp, "hypothesis file, one summary per line")->required();
  evaluate->add_option("--ref", ref, "reference file, one summary per line")->required();
  evaluate->add_option("--name", report_name, "report file name inside --out");
  evaluate->add_option("--beta", beta, "ROUGE-L recall weight");

  std::string in_file;
  double wer = 0.354;
  auto* corrupt = app.add_subcommand("corrupt", "simulate recognition errors in a token file");
  common(corrupt, false);
  corrupt->add_option("--in", in_file, "input file, one line per document")->required();
  corrupt->add_option("--wer", wer, "target word error rate");

  std::size_t index = 0;
  auto* attention = app.add_subcommand("attention", "export attention weights for one example");
  common(attention, true);
  attention->add_option("--split", split, "split holding the example");
  attention->add_option("--index", index, "example position within the split");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();  // program name
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << e.what() << "\n";
      return 0;
    }
    err << "howsumm: " << one_line(e.what()) << "\n";
    return 1;
  }

  try {
    auto resolve = [&](bool required) -> std::optional<RunConfig> {
      if (config_path.empty()) {
        if (required) throw Error("cli", "--config is required");
        return std::nullopt;
      }
      auto cfg = load_config(config_path);
      if (seed) cfg.set_seed(*seed);
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      return cfg;
    };
    auto with_precision = [](const RunConfig& cfg, auto&& fn32, auto&& fn64) {
      if (cfg.precision == 32) fn32();
      else fn64();
    };

    if (prepare->parsed()) {
      cmd_prepare(*resolve(true), out);
    } else if (train->parsed()) {
      const auto cfg = *resolve(true);
      with_precision(cfg, [&] { cmd_train<float>(cfg, out); }, [&] { cmd_train<double>(cfg, out); });
    } else if (decode->parsed()) {
      auto cfg = *resolve(true);
      if (decode_wer) cfg.decode.input_wer = *decode_wer;
      if (!(cfg.decode.input_wer >= 0.0 && cfg.decode.input_wer <= 1.0))
        throw Error("cli", "--wer must lie in [0, 1]");
      with_precision(cfg, [&] { cmd_decode<float>(cfg, split, out); }, [&] { cmd_decode<double>(cfg, split, out); });
    } else if (baseline->parsed()) {
      cmd_baseline(*resolve(true), kind, split, out);
    } else if (evaluate->parsed()) {
      const auto cfg = resolve(false);
      const fs::path dir = !out_dir.empty() ? fs::path(out_dir) : (cfg ? cfg->out_dir : fs::path("."));
      cmd_evaluate(cfg, hyp, ref, dir, report_name, beta, out);
    } else if (corrupt->parsed()) {
      auto cfg = resolve(false).value_or(RunConfig{});
      if (seed) cfg.set_seed(*seed);
      const fs::path dir = !out_dir.empty() ? fs::path(out_dir) : cfg.out_dir;
      cmd_corrupt(cfg, in_file, wer, dir, out);
    } else if (attention->parsed()) {
      const auto cfg = *resolve(true);
      with_precision(cfg, [&] { cmd_attention<float>(cfg, split, index, out); },
                     [&] { cmd_attention<double>(cfg, split, index, out); });
    }
  } catch (const std::exception& e) {
    err << "howsumm: " << one_line(e.what()) << "\n";
    return 1;
  }
  return 0;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace howsumm::cli
