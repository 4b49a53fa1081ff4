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

#include <array>
#include <cstdint>

#include "jcimage/util/bytes.h"

namespace jcimage::flash {

// CRC-8 with polynomial x^8 + x^2 + x + 1 (0x07), zero init, no reflection and
// no final XOR. This parameterization is part of the on-flash format.
inline constexpr uint8_t kCrc8Polynomial = 0x07;

namespace internal {

constexpr std::array<uint8_t, 256> MakeCrc8Table() {
  std::array<uint8_t, 256> table{};
  for (int i = 0; i < 256; ++i) {
    uint8_t crc = static_cast<uint8_t>(i);
    for (int bit = 0; bit < 8; ++bit) {
      crc = (crc & 0x80) ? static_cast<uint8_t>((crc << 1) ^ kCrc8Polynomial)
                         : static_cast<uint8_t>(crc << 1);
    }
    table[i] = crc;
  }
  return table;
}

inline constexpr std::array<uint8_t, 256> kCrc8Table = MakeCrc8Table();

}  // namespace internal

// Continues a running CRC over `bytes`. Start with `crc = 0`.
constexpr uint8_t Crc8Update(uint8_t crc, ByteView bytes) {
  for (uint8_t b : bytes) crc = internal::kCrc8Table[crc ^ b];
  return crc;
}

constexpr uint8_t Crc8(ByteView bytes) { return Crc8Update(0, bytes); }

}  // namespace jcimage::flash
