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

// Reference implementations used only by tests. They deliberately avoid the
// library code paths they check.

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "jcimage/util/bytes.h"

namespace jcimage::testing {

// Polynomial long division of M(x) * x^8 by x^8 + x^2 + x + 1, one bit at a
// time.
inline uint8_t Crc8LongDivision(ByteView message) {
  uint16_t remainder = 0;
  auto shift_in = [&](unsigned bit) {
    remainder = static_cast<uint16_t>((remainder << 1) | bit);
    if (remainder & 0x100) remainder ^= 0x107;
  };
  for (uint8_t byte : message) {
    for (int i = 7; i >= 0; --i) shift_in((byte >> i) & 1u);
  }
  for (int i = 0; i < 8; ++i) shift_in(0);
  return static_cast<uint8_t>(remainder);
}

inline Bytes RandomBytes(std::mt19937_64& rng, size_t n) {
  Bytes out(n);
  std::uniform_int_distribution<int> dist(0, 255);
  for (auto& b : out) b = static_cast<uint8_t>(dist(rng));
  return out;
}

// Key/value model the filesystem is replayed against: last write wins.
using ReplayModel = std::map<Bytes, Bytes>;

}  // namespace jcimage::testing
