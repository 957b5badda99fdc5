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
#include <string>

#include "howsumm/common.hpp"

namespace howsumm::models {

enum class Variant {
  kTextOnly,      // bi-GRU over the transcript
  kVideoProj,     // linear projection of action features, no recurrence
  kVideoRnn,      // bi-GRU over action features
  kHierarchical,  // both encoders fused by hierarchical attention
};

inline std::string to_string(Variant v) {
  switch (v) {
    case Variant::kTextOnly: return "text_only";
    case Variant::kVideoProj: return "video_proj";
    case Variant::kVideoRnn: return "video_rnn";
    case Variant::kHierarchical: return "hierarchical";
  }
  return "?";
}

inline Variant parse_variant(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "text_only") return Variant::kTextOnly;
  if (s == "video_proj") return Variant::kVideoProj;
  if (s == "video_rnn") return Variant::kVideoRnn;
  if (s == "hierarchical") return Variant::kHierarchical;
  throw Error("models", "unknown variant '" + s + "'");
}

inline bool uses_text(Variant v) { return v == Variant::kTextOnly || v == Variant::kHierarchical; }
inline bool uses_video(Variant v) { return v != Variant::kTextOnly; }

struct ModelConfig {
  Variant variant = Variant::kTextOnly;
  std::size_t d_h = 256;
  std::size_t enc_layers = 2;
  std::size_t dec_layers = 2;
  std::size_t vocab_cap = 20000;
  std::size_t src_limit = 600;
  std::size_t d_v = 0;  // action-feature dimension; required by video variants
  std::size_t embed_dim = 128;
  std::uint64_t seed = 1;
  double init_scale = 0.08;

  void validate() const {
    if (d_h < 1 || enc_layers < 1 || dec_layers < 1 || vocab_cap < 1 || src_limit < 1 || embed_dim < 1)
      throw Error("models", "model dimensions must be >= 1");
    if (uses_video(variant) && d_v < 1) throw Error("models", "variant " + to_string(variant) + " needs d_v >= 1");
    if (!(init_scale > 0.0)) throw Error("models", "init_scale must be > 0");
  }
};

}  // namespace howsumm::models
