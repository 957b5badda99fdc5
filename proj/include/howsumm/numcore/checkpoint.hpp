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
#include <filesystem>
#include <string>
#include <string_view>

#include "howsumm/common.hpp"
#include "howsumm/numcore/param_store.hpp"

namespace howsumm::numcore {

// PSTO layout, all integers little-endian:
//   "PSTO" u32 count
//   per entry: u32 name_len, name bytes, u32 rank, rank x u32 dims,
//              value, m, v payloads as float64
//   u64 step counter
namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}
inline void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}
  std::uint64_t uint(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }
  std::string_view take(std::size_t n) {
    need(n);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw Error("numcore", "truncated checkpoint");
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

template <class T>
std::string encode_checkpoint(const ParamStore<T>& store) {
  std::string out = "PSTO";
  detail::put_u32(out, static_cast<std::uint32_t>(store.entries().size()));
  for (const auto& [name, e] : store.entries()) {
    detail::put_u32(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    detail::put_u32(out, static_cast<std::uint32_t>(e.value.rank()));
    for (const auto d : e.value.shape()) detail::put_u32(out, static_cast<std::uint32_t>(d));
    for (const Array<T>* a : {&e.value, &e.m, &e.v})
      for (const T x : a->storage()) detail::put_u64(out, std::bit_cast<std::uint64_t>(static_cast<double>(x)));
  }
  detail::put_u64(out, store.step());
  return out;
}

template <class T>
ParamStore<T> decode_checkpoint(std::string_view bytes) {
  if (bytes.size() < 4 || bytes.substr(0, 4) != "PSTO") throw Error("numcore", "bad checkpoint magic");
  detail::Reader r(bytes.substr(4));
  ParamStore<T> store;
  const auto count = r.uint(4);
  for (std::uint64_t k = 0; k < count; ++k) {
    const auto name = std::string(r.take(r.uint(4)));
    const auto rank = r.uint(4);
    if (rank == 0) throw Error("numcore", "checkpoint entry '" + name + "' has rank 0");
    Shape shape;
    for (std::uint64_t i = 0; i < rank; ++i) shape.push_back(r.uint(4));
    Array<T> parts[3];
    for (auto& a : parts) {
      a = Array<T>(shape);
      for (auto& x : a.storage()) x = static_cast<T>(std::bit_cast<double>(r.uint(8)));
    }
    store.add(name, std::move(parts[0]));
    store.entry(name).m = std::move(parts[1]);
    store.entry(name).v = std::move(parts[2]);
  }
  store.set_step(r.uint(8));
  if (!r.done()) throw Error("numcore", "trailing bytes in checkpoint");
  return store;
}

template <class T>
void save_checkpoint(const std::filesystem::path& path, const ParamStore<T>& store) {
  atomic_write(path, encode_checkpoint(store));
}

template <class T>
ParamStore<T> load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint<T>(read_file(path, "numcore"));
}

}  // namespace howsumm::numcore
