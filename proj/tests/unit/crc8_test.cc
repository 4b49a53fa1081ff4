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

#include "jcimage/flash/crc8.h"

#include <gtest/gtest.h>

#include <random>

#include "../support/oracles.h"

namespace jcimage::flash {
namespace {

using testing::Crc8LongDivision;

TEST(Crc8, EmptyMessageIsZero) { EXPECT_EQ(Crc8({}), 0x00); }

TEST(Crc8, CheckValue) {
  // Standard check input "123456789" for CRC-8/SMBUS.
  const Bytes msg = {'1', '2', '3', '4', '5', '6', '7', '8', '9'};
  EXPECT_EQ(Crc8(msg), 0xF4);
  EXPECT_EQ(Crc8LongDivision(msg), 0xF4);
}

TEST(Crc8, EverySingleByteMatchesLongDivision) {
  for (int v = 0; v < 256; ++v) {
    const uint8_t m = static_cast<uint8_t>(v);
    EXPECT_EQ(Crc8(ByteView(&m, 1)), Crc8LongDivision(ByteView(&m, 1))) << v;
  }
}

TEST(Crc8, IncrementalUpdateMatchesOneShot) {
  std::mt19937_64 rng(7);
  const Bytes msg = testing::RandomBytes(rng, 64);
  const uint8_t split = Crc8Update(Crc8(ByteView(msg).first(20)), ByteView(msg).subspan(20));
  EXPECT_EQ(split, Crc8(msg));
}

TEST(Crc8, DetectsEverySingleBitFlipInShortMessages) {
  // Exhaustive over all 1- and 2-byte messages.
  for (uint32_t len = 1; len <= 2; ++len) {
    for (uint32_t value = 0; value < (1u << (8 * len)); ++value) {
      Bytes msg(len);
      for (uint32_t i = 0; i < len; ++i) msg[i] = static_cast<uint8_t>(value >> (8 * i));
      const uint8_t crc = Crc8(msg);
      for (uint32_t bit = 0; bit < 8 * len; ++bit) {
        Bytes flipped = msg;
        flipped[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
        ASSERT_NE(Crc8(flipped), crc);
      }
    }
  }
}

}  // namespace
}  // namespace jcimage::flash
