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

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "howsumm/common.hpp"

namespace howsumm::corpus {

// One feature vector per 16-frame video segment.
using FeatureSequence = std::vector<std::vector<float>>;

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

inline std::uint32_t get_u32(std::string_view in, std::size_t pos) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  return v;
}

}  // namespace detail

// VFEA container: "VFEA", u32 T, u32 D, then T*D little-endian float32,
// row-major by time step.
inline std::string encode_features(const FeatureSequence& seq) {
  if (seq.empty()) throw Error("corpus", "empty feature sequence");
  const auto dim = seq.front().size();
  if (dim == 0) throw Error("corpus", "feature dimension must be >= 1");
  std::string out = "VFEA";
  detail::put_u32(out, static_cast<std::uint32_t>(seq.size()));
  detail::put_u32(out, static_cast<std::uint32_t>(dim));
  out.reserve(out.size() + seq.size() * dim * 4);
  for (const auto& row : seq) {
    if (row.size() != dim) throw Error("corpus", "feature-dimension mismatch");
    for (const float f : row) detail::put_u32(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

inline FeatureSequence decode_features(std::string_view bytes) {
  if (bytes.size() < 4 || bytes.substr(0, 4) != "VFEA") throw Error("corpus", "bad magic");
  if (bytes.size() < 12) throw Error("corpus", "truncated header");
  const std::uint64_t steps = detail::get_u32(bytes, 4);
  const std::uint64_t dim = detail::get_u32(bytes, 8);
  if (steps == 0) throw Error("corpus", "empty feature sequence (T=0)");
  if (dim == 0) throw Error("corpus", "feature dimension must be >= 1");
  const std::uint64_t need = 12 + steps * dim * 4;
  if (bytes.size() < need) throw Error("corpus", "truncated payload");
  if (bytes.size() > need) throw Error("corpus", "trailing bytes after payload");
  FeatureSequence seq(steps, std::vector<float>(dim));
  std::size_t pos = 12;
  for (auto& row : seq)
    for (auto& f : row) {
      f = std::bit_cast<float>(detail::get_u32(bytes, pos));
      pos += 4;
    }
  return seq;
}

inline FeatureSequence read_features(const std::filesystem::path& path) {
  try {
    return decode_features(read_file(path, "corpus"));
  } catch (const Error& e) {
    throw Error("corpus", std::string(e.what()).substr(8) + " in " + path.string());
  }
}

inline void write_features(const std::filesystem::path& path, const FeatureSequence& seq) {
  atomic_write(path, encode_features(seq));
}

}  // namespace howsumm::corpus
