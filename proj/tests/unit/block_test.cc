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

#include "jcimage/flash/block.h"

#include <gtest/gtest.h>

#include "jcimage/flash/crc8.h"

namespace jcimage::flash {
namespace {

TEST(BlockHeader, BitLayout) {
  BlockHeader h{.unused = true, .valid = true, .tag_length = 3, .long_length = false};
  EXPECT_EQ(h.Encode(), 0b1100'0110);
  h.unused = false;
  EXPECT_EQ(h.Encode(), 0b0100'0110);
  h.long_length = true;
  EXPECT_EQ(h.Encode(), 0b0100'0111);
  EXPECT_EQ(BlockHeader::Decode(0b0100'0111), h);
  EXPECT_EQ(BlockHeader::TagLengthBits(0xFF), 31);
  EXPECT_EQ(BlockHeader::TagLengthBits(0x00), 0);
}

TEST(Block, StaticFieldExampleEncoding) {
  const Bytes tag = {0x02, 0x03, 0x00};
  const Bytes data = {0x80, 0x01, 0x02, 0x03, 0x04};
  const Bytes block = EncodeBlock(tag, data, /*committed=*/true);
  ASSERT_EQ(block.size(), 1 + 1 + 3 + 5 + 1u);
  const BlockHeader header = BlockHeader::Decode(block[0]);
  EXPECT_FALSE(header.unused);
  EXPECT_TRUE(header.valid);
  EXPECT_EQ(header.tag_length, 3);
  EXPECT_FALSE(header.long_length);
  EXPECT_EQ(block[1], 5);
  EXPECT_EQ(Bytes(block.begin() + 2, block.begin() + 5), tag);
  EXPECT_EQ(Bytes(block.begin() + 5, block.begin() + 10), data);

  Bytes covered = {static_cast<uint8_t>(block[0] & 0x3F)};
  covered.insert(covered.end(), block.begin() + 1, block.end() - 1);
  EXPECT_EQ(block.back(), Crc8(covered));
}

TEST(Block, LongLengthIsFourBytesBigEndian) {
  const Bytes tag = {0x09};
  const Bytes data(300, 0xAB);
  const Bytes block = EncodeBlock(tag, data, true);
  EXPECT_TRUE(BlockHeader::Decode(block[0]).long_length);
  EXPECT_EQ(Bytes(block.begin() + 1, block.begin() + 5), (Bytes{0x00, 0x00, 0x01, 0x2C}));
  EXPECT_EQ(block.size(), EncodedBlockSize(1, 300));
}

TEST(Block, HashsumIgnoresStateBits) {
  const Bytes tag = {0x01, 0x02};
  const Bytes data = {0x10};
  const Bytes pending = EncodeBlock(tag, data, false);
  const Bytes committed = EncodeBlock(tag, data, true);
  EXPECT_EQ(pending.back(), committed.back());
}

TEST(ScanSector, SkipsErasedRunsAndStopsAtEmpty) {
  FlashDevice device({256, 256});
  const Bytes block = EncodeBlock(Bytes{0x00}, Bytes(8, 0x01), true);
  device.Program(0, Bytes(4, 0x00));
  device.Program(4, block);
  const SectorScan scan = ScanSector(device, 0);
  ASSERT_EQ(scan.blocks.size(), 1u);
  EXPECT_EQ(scan.erased_filler, 4u);
  EXPECT_EQ(scan.blocks[0].address, 4u);
  EXPECT_EQ(scan.blocks[0].state, BlockState::kLive);
  EXPECT_EQ(scan.write_cursor, 4 + block.size());
  EXPECT_FALSE(scan.corrupt);
}

TEST(ScanSector, OverrunningLengthMarksSectorCorrupt) {
  FlashDevice device({64});
  // Header for tag length 1 with 1-byte length 200: runs past a 64-byte sector.
  device.ProgramByte(0, BlockHeader{.unused = false, .tag_length = 1}.Encode());
  device.ProgramByte(1, 200);
  const SectorScan scan = ScanSector(device, 0);
  EXPECT_TRUE(scan.corrupt);
  EXPECT_EQ(scan.corrupt_at, 0u);
  EXPECT_EQ(scan.write_cursor, 64u);
}

TEST(ScanSector, BytesAfterFreeRegionMarkCorrupt) {
  FlashDevice device({64});
  device.ProgramByte(40, 0x12);
  const SectorScan scan = ScanSector(device, 0);
  EXPECT_TRUE(scan.corrupt);
  EXPECT_EQ(scan.corrupt_at, 40u);
}

TEST(ScanSector, ClassifiesStates) {
  FlashDevice device({256});
  Bytes a = EncodeBlock(Bytes{1}, Bytes{1}, false);        // uncommitted
  Bytes b = EncodeBlock(Bytes{2}, Bytes{2}, true);
  b[0] &= static_cast<uint8_t>(~BlockHeader::kValidBit);   // superseded
  Bytes c = EncodeBlock(Bytes{3}, Bytes{3}, true);
  c[3] ^= 0x01;                                            // corrupt data
  Bytes d = EncodeBlock(Bytes{4}, Bytes{4}, true);
  uint32_t at = 0;
  for (const Bytes* blk : {&a, &b, &c, &d}) {
    device.Program(at, *blk);
    at += static_cast<uint32_t>(blk->size());
  }
  const SectorScan scan = ScanSector(device, 0);
  ASSERT_EQ(scan.blocks.size(), 4u);
  EXPECT_EQ(scan.blocks[0].state, BlockState::kUncommitted);
  EXPECT_EQ(scan.blocks[1].state, BlockState::kSuperseded);
  EXPECT_EQ(scan.blocks[2].state, BlockState::kCorrupt);
  EXPECT_EQ(scan.blocks[3].state, BlockState::kLive);
}

}  // namespace
}  // namespace jcimage::flash
