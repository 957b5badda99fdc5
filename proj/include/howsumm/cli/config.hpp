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

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "howsumm/common.hpp"
#include "howsumm/corpus/corpus.hpp"
#include "howsumm/models/config.hpp"
#include "howsumm/models/train.hpp"

namespace howsumm::cli {

struct DecodeSettings {
  std::size_t beam = 5;
  std::size_t max_len = 50;
  double input_wer = 0.0;  // corrupt source transcripts before decoding
};

struct MetricSettings {
  double beta = 1.0;
  std::size_t stop_top_k = 25;
  double stop_doc_frac = 0.4;
};

struct BaselineSettings {
  std::size_t lm_order = 3;
  double lm_k = 0.01;
  std::size_t lm_max_len = 50;
};

struct RunConfig {
  std::filesystem::path manifest;
  models::ModelConfig model;
  models::TrainSchedule schedule;
  DecodeSettings decode;
  MetricSettings metric;
  BaselineSettings baseline;
  double corrupt_sub = 0.6;
  double corrupt_del = 0.2;
  double corrupt_ins = 0.2;
  bool separate_vocab = false;
  bool extract_input = false;  // feed the centroid sentence instead of the full transcript
  int precision = 64;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "out";

  // Propagates the run seed into the model and schedule.
  void set_seed(std::uint64_t s) {
    seed = s;
    model.seed = s;
    schedule.seed = s;
  }
};

namespace detail {

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    T out;
    if constexpr (std::is_same_v<T, double>) out = std::stod(value, &used);
    else if constexpr (std::is_signed_v<T>) out = static_cast<T>(std::stoll(value, &used));
    else {
      if (!value.empty() && value[0] == '-') throw std::invalid_argument(value);
      out = static_cast<T>(std::stoull(value, &used));
    }
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw Error("config", "cannot parse value '" + value + "' for key '" + key + "'");
  }
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw Error("config", "cannot parse value '" + value + "' for key '" + key + "'");
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// One accessor per key: a setter from text and a getter to text.
struct Field {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class T, class Access>
Field number_field(const std::string& key, Access access) {
  return {[key, access](RunConfig& c, const std::string& v) { access(c) = parse_number<T>(key, v); },
          [access](const RunConfig& c) {
            if constexpr (std::is_same_v<T, double>) return format_double(access(const_cast<RunConfig&>(c)));
            else return std::to_string(access(const_cast<RunConfig&>(c)));
          }};
}

inline const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> f = [] {
    std::map<std::string, Field> m;
    m["manifest"] = {[](RunConfig& c, const std::string& v) { c.manifest = v; },
                     [](const RunConfig& c) { return c.manifest.string(); }};
    m["out_dir"] = {[](RunConfig& c, const std::string& v) { c.out_dir = v; },
                    [](const RunConfig& c) { return c.out_dir.string(); }};
    m["variant"] = {[](RunConfig& c, const std::string& v) {
                      try {
                        c.model.variant = models::parse_variant(v);
                      } catch (const Error&) {
                        throw Error("config", "cannot parse value '" + v + "' for key 'variant'");
                      }
                    },
                    [](const RunConfig& c) { return models::to_string(c.model.variant); }};
    m["seed"] = {[](RunConfig& c, const std::string& v) { c.set_seed(parse_number<std::uint64_t>("seed", v)); },
                 [](const RunConfig& c) { return std::to_string(c.seed); }};
    m["d_h"] = number_field<std::size_t>("d_h", [](RunConfig& c) -> auto& { return c.model.d_h; });
    m["enc_layers"] = number_field<std::size_t>("enc_layers", [](RunConfig& c) -> auto& { return c.model.enc_layers; });
    m["dec_layers"] = number_field<std::size_t>("dec_layers", [](RunConfig& c) -> auto& { return c.model.dec_layers; });
    m["vocab_cap"] = number_field<std::size_t>("vocab_cap", [](RunConfig& c) -> auto& { return c.model.vocab_cap; });
    m["src_limit"] = number_field<std::size_t>("src_limit", [](RunConfig& c) -> auto& { return c.model.src_limit; });
    m["d_v"] = number_field<std::size_t>("d_v", [](RunConfig& c) -> auto& { return c.model.d_v; });
    m["embed_dim"] = number_field<std::size_t>("embed_dim", [](RunConfig& c) -> auto& { return c.model.embed_dim; });
    m["init_scale"] = number_field<double>("init_scale", [](RunConfig& c) -> auto& { return c.model.init_scale; });
    m["lr"] = number_field<double>("lr", [](RunConfig& c) -> auto& { return c.schedule.lr; });
    m["max_epochs"] = number_field<std::size_t>("max_epochs", [](RunConfig& c) -> auto& { return c.schedule.max_epochs; });
    m["batch_size"] = number_field<std::size_t>("batch_size", [](RunConfig& c) -> auto& { return c.schedule.batch_size; });
    m["stop_below_train_loss"] =
        number_field<double>("stop_below_train_loss", [](RunConfig& c) -> auto& { return c.schedule.stop_below_train_loss; });
    m["halve_on_no_improve"] = {
        [](RunConfig& c, const std::string& v) { c.schedule.halve_on_no_improve = parse_bool("halve_on_no_improve", v); },
        [](const RunConfig& c) { return std::string(c.schedule.halve_on_no_improve ? "true" : "false"); }};
    m["separate_vocab"] = {[](RunConfig& c, const std::string& v) { c.separate_vocab = parse_bool("separate_vocab", v); },
                           [](const RunConfig& c) { return std::string(c.separate_vocab ? "true" : "false"); }};
    m["extract_input"] = {[](RunConfig& c, const std::string& v) { c.extract_input = parse_bool("extract_input", v); },
                          [](const RunConfig& c) { return std::string(c.extract_input ? "true" : "false"); }};
    m["precision"] = {[](RunConfig& c, const std::string& v) {
                        const int p = parse_number<int>("precision", v);
                        if (p != 32 && p != 64) throw Error("config", "precision must be 32 or 64");
                        c.precision = p;
                      },
                      [](const RunConfig& c) { return std::to_string(c.precision); }};
    m["beam"] = number_field<std::size_t>("beam", [](RunConfig& c) -> auto& { return c.decode.beam; });
    m["max_len"] = number_field<std::size_t>("max_len", [](RunConfig& c) -> auto& { return c.decode.max_len; });
    m["input_wer"] = number_field<double>("input_wer", [](RunConfig& c) -> auto& { return c.decode.input_wer; });
    m["beta"] = number_field<double>("beta", [](RunConfig& c) -> auto& { return c.metric.beta; });
    m["stop_top_k"] = number_field<std::size_t>("stop_top_k", [](RunConfig& c) -> auto& { return c.metric.stop_top_k; });
    m["stop_doc_frac"] = number_field<double>("stop_doc_frac", [](RunConfig& c) -> auto& { return c.metric.stop_doc_frac; });
    m["lm_order"] = number_field<std::size_t>("lm_order", [](RunConfig& c) -> auto& { return c.baseline.lm_order; });
    m["lm_k"] = number_field<double>("lm_k", [](RunConfig& c) -> auto& { return c.baseline.lm_k; });
    m["lm_max_len"] = number_field<std::size_t>("lm_max_len", [](RunConfig& c) -> auto& { return c.baseline.lm_max_len; });
    m["corrupt_sub"] = number_field<double>("corrupt_sub", [](RunConfig& c) -> auto& { return c.corrupt_sub; });
    m["corrupt_del"] = number_field<double>("corrupt_del", [](RunConfig& c) -> auto& { return c.corrupt_del; });
    m["corrupt_ins"] = number_field<double>("corrupt_ins", [](RunConfig& c) -> auto& { return c.corrupt_ins; });
    return m;
  }();
  return f;
}

}  // namespace detail

inline std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, f] : detail::fields()) keys.push_back(k);
  return keys;
}

// Parses key=value text. Every key must be known; absent keys keep their
// defaults. `base` anchors relative manifest/out_dir paths.
inline RunConfig parse_config(const std::vector<std::string>& lines, const std::filesystem::path& base = {}) {
  RunConfig cfg;
  bool has_manifest = false;
  std::map<std::string, bool> seen;
  std::size_t lineno = 0;
  for (const auto& raw : lines) {
    ++lineno;
    const auto line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("config", "line " + std::to_string(lineno) + ": expected key=value");
    const auto key = trim(std::string_view(line).substr(0, eq));
    const auto value = trim(std::string_view(line).substr(eq + 1));
    const auto& f = detail::fields();
    const auto it = f.find(key);
    if (it == f.end()) throw Error("config", "unknown key '" + key + "'");
    if (seen[key]) throw Error("config", "duplicate key '" + key + "'");
    seen[key] = true;
    it->second.set(cfg, value);
    if (key == "manifest") has_manifest = true;
  }
  if (!has_manifest || cfg.manifest.empty()) throw Error("config", "missing manifest");
  if (cfg.manifest.is_relative() && !base.empty()) cfg.manifest = base / cfg.manifest;
  if (cfg.out_dir.is_relative() && !base.empty() && seen["out_dir"]) cfg.out_dir = base / cfg.out_dir;
  const double mix = cfg.corrupt_sub + cfg.corrupt_del + cfg.corrupt_ins;
  if (std::abs(mix - 1.0) > 1e-9) throw Error("config", "corrupt_sub + corrupt_del + corrupt_ins must equal 1");
  try {
    cfg.model.validate();
  } catch (const Error& e) {
    // d_v may still be inferred from the corpus.
    if (!(models::uses_video(cfg.model.variant) && cfg.model.d_v == 0)) throw Error("config", e.what());
  }
  cfg.schedule.validate();
  return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error("config", "config not found: " + path.string());
  auto cfg = parse_config(read_lines(path, "config"), path.parent_path());
  if (!std::filesystem::exists(cfg.manifest)) throw Error("config", "manifest not found: " + cfg.manifest.string());
  return cfg;
}

inline std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& [k, f] : detail::fields()) out += k + "=" + f.get(cfg) + "\n";
  return out;
}

inline bool operator==(const RunConfig& a, const RunConfig& b) { return serialize_config(a) == serialize_config(b); }

}  // namespace howsumm::cli
