// Copyright 2026 The jcimage Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace jcimage {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

// Append-only big-endian writer. All multi-byte quantities in CAP components
// and filesystem blocks are big-endian.
class ByteWriter {
 public:
  void U1(uint32_t v) { out_.push_back(static_cast<uint8_t>(v)); }
  void U2(uint32_t v) {
    U1(v >> 8);
    U1(v);
  }
  void U4(uint32_t v) {
    U2(v >> 16);
    U2(v);
  }
  void Append(ByteView bytes) { out_.insert(out_.end(), bytes.begin(), bytes.end()); }

  // Overwrites two bytes at `pos`; used to back-patch sizes.
  void PatchU2(size_t pos, uint32_t v) {
    out_.at(pos) = static_cast<uint8_t>(v >> 8);
    out_.at(pos + 1) = static_cast<uint8_t>(v);
  }

  size_t size() const { return out_.size(); }
  const Bytes& bytes() const& { return out_; }
  Bytes bytes() && { return std::move(out_); }

 private:
  Bytes out_;
};

inline uint16_t ReadU2(ByteView b, size_t pos) {
  return static_cast<uint16_t>((b[pos] << 8) | b[pos + 1]);
}

inline uint32_t ReadU4(ByteView b, size_t pos) {
  return (uint32_t{b[pos]} << 24) | (uint32_t{b[pos + 1]} << 16) |
         (uint32_t{b[pos + 2]} << 8) | uint32_t{b[pos + 3]};
}

// Lowercase hex without separators, e.g. "0a1b".
std::string ToHex(ByteView bytes);

// Parses hex digits, ignoring ':' ' ' and '-' separators. Throws InputError.
Bytes FromHex(std::string_view text);

}  // namespace jcimage
