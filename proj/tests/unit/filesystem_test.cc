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

#include "jcimage/flash/filesystem.h"

#include <gtest/gtest.h>

#include <random>

#include "../support/fs_harness.h"
#include "../support/oracles.h"

namespace jcimage::flash {
namespace {

const std::vector<uint32_t> kToyGeometry = {1024, 1024, 1024};

Bytes B(std::initializer_list<uint8_t> bytes) { return Bytes(bytes); }

TEST(FileSystem, FreshDeviceMountsEmpty) {
  FlashDevice device(kToyGeometry);
  FileSystem fs = FileSystem::Mount(device);
  EXPECT_TRUE(fs.table().entries.empty());
  EXPECT_EQ(fs.table().reserved_sector, 2u);
}

TEST(FileSystem, IndexesCommittedBlock) {
  FlashDevice device(kToyGeometry);
  device.Program(0, EncodeBlock(B({0x00}), Bytes(8, 0xFF), true));
  FileSystem fs = FileSystem::Mount(device);
  ASSERT_EQ(fs.table().entries.size(), 1u);
  EXPECT_EQ(fs.Read(B({0x00})), Bytes(8, 0xFF));
}

TEST(FileSystem, SupersededBlockLosesToValidOne) {
  FlashDevice device(kToyGeometry);
  Bytes first = EncodeBlock(B({7}), B({1}), true);
  first[0] &= static_cast<uint8_t>(~BlockHeader::kValidBit);
  const Bytes second = EncodeBlock(B({7}), B({2}), true);
  device.Program(0, first);
  device.Program(static_cast<uint32_t>(first.size()), second);
  FileSystem fs = FileSystem::Mount(device);
  EXPECT_EQ(fs.Read(B({7})), B({2}));
  EXPECT_EQ(fs.table().entries.at(B({7})).address, first.size());
}

TEST(FileSystem, WriteReadAndRemount) {
  FlashDevice device(kToyGeometry);
  {
    FileSystem fs = FileSystem::Mount(device);
    fs.Write(B({0x02, 0x03, 0x00}), B({0x80, 0x01, 0x02, 0x03, 0x04}));
    EXPECT_EQ(fs.Read(B({0x02, 0x03, 0x00})), B({0x80, 0x01, 0x02, 0x03, 0x04}));
    EXPECT_EQ(fs.Read(B({0x09})), std::nullopt);
  }
  FileSystem again = FileSystem::Mount(device);
  EXPECT_EQ(again.Read(B({0x02, 0x03, 0x00})), B({0x80, 0x01, 0x02, 0x03, 0x04}));
}

TEST(FileSystem, WrittenBlockIsCommittedAndValid) {
  FlashDevice device(kToyGeometry);
  FileSystem fs = FileSystem::Mount(device);
  fs.Write(B({0x02, 0x03, 0x00}), B({0x80, 0x01, 0x02, 0x03, 0x04}));
  const uint32_t at = fs.table().entries.begin()->second.address;
  const BlockHeader header = BlockHeader::Decode(device.Read(at));
  EXPECT_FALSE(header.unused);
  EXPECT_TRUE(header.valid);
  EXPECT_EQ(header.tag_length, 3);
  EXPECT_FALSE(header.long_length);
  EXPECT_EQ(device.Read(at + 1), 5);
}

TEST(FileSystem, OverwriteLeavesExactlyOneLiveBlock) {
  FlashDevice device(kToyGeometry);
  FileSystem fs = FileSystem::Mount(device);
  for (uint8_t i = 0; i < 5; ++i) fs.Write(B({1, 2}), B({i}));
  size_t live = 0;
  for (const SectorScan& scan : ScanDevice(device)) {
    for (const ScannedBlock& block : scan.blocks) {
      if (block.tag == B({1, 2}) && block.state == BlockState::kLive) ++live;
    }
  }
  EXPECT_EQ(live, 1u);
  EXPECT_EQ(fs.Read(B({1, 2})), B({4}));
}

TEST(FileSystem, RejectsBadTagLengths) {
  FlashDevice device(kToyGeometry);
  FileSystem fs = FileSystem::Mount(device);
  EXPECT_THROW(fs.Write({}, B({1})), TagLenInvalid);
  EXPECT_THROW(fs.Write(Bytes(31, 1), B({1})), TagLenInvalid);
  EXPECT_NO_THROW(fs.Write(Bytes(30, 1), B({1})));
}

TEST(FileSystem, RejectsBlockLargerThanAnySector) {
  FlashDevice device(kToyGeometry);
  FileSystem fs = FileSystem::Mount(device);
  EXPECT_THROW(fs.Write(B({1}), Bytes(1024, 0)), DataTooLarge);
}

TEST(FileSystem, FullWhenLiveDataExhaustsSpace) {
  FlashDevice device(kToyGeometry);
  FileSystem fs = FileSystem::Mount(device);
  const Bytes payload(400, 0x5A);
  fs.Write(B({1}), payload);
  fs.Write(B({2}), payload);
  fs.Write(B({3}), payload);
  fs.Write(B({4}), payload);
  EXPECT_THROW(fs.Write(B({5}), payload), FlashFull);
  // A failed write leaves everything readable.
  for (uint8_t t = 1; t <= 4; ++t) EXPECT_EQ(fs.Read(B({t})), payload);
  EXPECT_FALSE(fs.Contains(B({5})));
}

TEST(FileSystem, WriteDefragmentsWhenOutOfSpace) {
  FlashDevice device(kToyGeometry);
  FileSystem fs = FileSystem::Mount(device);
  for (int round = 0; round < 50; ++round) {
    fs.Write(B({1}), Bytes(100, static_cast<uint8_t>(round)));
  }
  EXPECT_EQ(fs.Read(B({1})), Bytes(100, 49));
  ASSERT_TRUE(fs.table().reserved_sector);
  EXPECT_TRUE(device.IsErased(*fs.table().reserved_sector));
}

TEST(FileSystem, DefragmentKeepsValidBlocksAndErasesVictim) {
  FlashDevice device(kToyGeometry);
  FileSystem fs = FileSystem::Mount(device);
  // Sector 0 is picked first (largest free, lowest index).
  for (uint8_t t = 0; t < 8; ++t) fs.Write(B({t}), B({t, t}));
  for (uint8_t t = 3; t < 8; ++t) fs.Write(B({t}), B({0xEE}));
  const auto before = fs.Contents();
  const size_t victim = device.SectorOf(fs.table().entries.at(B({0})).address);
  fs.Defragment(victim);
  EXPECT_TRUE(device.IsErased(victim));
  EXPECT_EQ(fs.table().reserved_sector, victim);
  EXPECT_EQ(fs.Contents(), before);
  FileSystem again = FileSystem::Mount(device);
  EXPECT_EQ(again.Contents(), before);
}

TEST(FileSystem, DefragmentEmptyVictimIsPlainErase) {
  FlashDevice device(kToyGeometry);
  uint32_t at = 0;
  for (uint8_t t = 0; t < 5; ++t) {
    Bytes block = EncodeBlock(B({t}), B({t}), true);
    block[0] &= static_cast<uint8_t>(~BlockHeader::kValidBit);
    device.Program(at, block);
    at += static_cast<uint32_t>(block.size());
  }
  device.Program(1024, EncodeBlock(B({9}), B({9}), true));
  FileSystem fs = FileSystem::Mount(device);
  const uint64_t ops_before = device.operation_count();
  fs.Defragment(0);
  EXPECT_EQ(device.operation_count(), ops_before + 1);  // the erase alone
  EXPECT_TRUE(device.IsErased(0));
  EXPECT_TRUE(device.IsErased(2));
  EXPECT_EQ(fs.table().reserved_sector, 0u);
  EXPECT_EQ(fs.Read(B({9})), B({9}));
}

TEST(FileSystem, DefragmentRefusesReservedAndOversizedVictim) {
  FlashDevice device({1024, 1024, 512});
  FileSystem fs = FileSystem::Mount(device);
  EXPECT_THROW(fs.Defragment(2), FsError);
  fs.Write(B({1}), Bytes(300, 1));
  fs.Write(B({2}), Bytes(300, 2));
  const size_t victim = device.SectorOf(fs.table().entries.at(B({1})).address);
  if (fs.table().sectors[victim].live_bytes > 512) {
    EXPECT_THROW(fs.Defragment(victim), ReservedTooSmall);
  }
}

TEST(FileSystem, MountRepairsDuplicateLiveBlocks) {
  FlashDevice device(kToyGeometry);
  const Bytes a = EncodeBlock(B({5}), B({1}), true);
  const Bytes b = EncodeBlock(B({5}), B({2}), true);
  device.Program(0, a);
  device.Program(1024, b);
  FileSystem fs = FileSystem::Mount(device);
  EXPECT_EQ(fs.table().repaired_duplicates, 1u);
  EXPECT_EQ(fs.Read(B({5})), B({1}));
  EXPECT_FALSE(BlockHeader::Decode(device.Read(1024)).valid);
  FileSystem again = FileSystem::Mount(device);
  EXPECT_EQ(again.table().repaired_duplicates, 0u);
  EXPECT_EQ(again.Read(B({5})), B({1}));
}

TEST(FileSystem, ReadOnlyMountLeavesDeviceUntouched) {
  FlashDevice device(kToyGeometry);
  device.Program(0, EncodeBlock(B({5}), B({1}), true));
  device.Program(1024, EncodeBlock(B({5}), B({2}), true));
  const uint64_t ops = device.operation_count();
  FileSystem fs = FileSystem::Mount(device, {.repair = false});
  EXPECT_EQ(device.operation_count(), ops);
  EXPECT_EQ(fs.Read(B({5})), B({1}));
}

TEST(FileSystem, ReadDetectsCorruptionAfterMount) {
  FlashDevice device(kToyGeometry);
  FileSystem fs = FileSystem::Mount(device);
  fs.Write(B({1}), B({0xFF, 0xFF}));
  const uint32_t at = fs.table().entries.at(B({1})).address;
  device.ProgramByte(at + 3, 0x00);
  EXPECT_THROW(fs.Read(B({1})), HashMismatch);
}

TEST(FileSystem, CorruptSectorIsContainedAndDefragmented) {
  FlashDevice device(kToyGeometry);
  {
    FileSystem fs = FileSystem::Mount(device);
    fs.Write(B({1}), B({1}));
    fs.Write(B({2}), B({2}));
  }
  // A header whose 4-byte length points far past the sector end.
  const uint32_t tail = static_cast<uint32_t>(2 * EncodedBlockSize(1, 1));
  device.ProgramByte(tail, BlockHeader{.unused = true, .tag_length = 1, .long_length = true}.Encode());
  FileSystem inspect = FileSystem::Mount(device, {.repair = false});
  EXPECT_EQ(inspect.table().corrupt_sectors, std::vector<size_t>{0});
  FileSystem fs = FileSystem::Mount(device);
  EXPECT_TRUE(fs.table().corrupt_sectors.empty());
  EXPECT_EQ(fs.Read(B({1})), B({1}));
  EXPECT_EQ(fs.Read(B({2})), B({2}));
}

TEST(FileSystem, NeverAttemptsZeroToOneTransition) {
  // The device throws FlashError on a 0 -> 1 program; a long random workload
  // must never trigger it.
  std::mt19937_64 rng(11);
  FlashDevice device(kToyGeometry);
  FileSystem fs = FileSystem::Mount(device);
  for (int i = 0; i < 2000; ++i) {
    const Bytes tag = {static_cast<uint8_t>(rng() % 6)};
    const Bytes data = testing::RandomBytes(rng, rng() % 90);
    ASSERT_NO_THROW(fs.Write(tag, data));
  }
}

TEST(FileSystem, CrashDuringDefragmentKeepsEveryPair) {
  FlashDevice device(kToyGeometry);
  FileSystem fs = FileSystem::Mount(device);
  for (uint8_t t = 0; t < 10; ++t) fs.Write(B({t}), Bytes(20 + t, t));
  for (uint8_t t = 0; t < 10; t += 2) fs.Write(B({t}), Bytes(15, 0xA0 | t));
  const auto expected = fs.Contents();
  const size_t victim = device.SectorOf(fs.table().entries.at(B({1})).address);
  const auto state = testing::DeviceState::Capture(device, kToyGeometry);

  size_t crashes = 0;
  const size_t cut_points = testing::ForEachCutPoint(
      state, [&](FileSystem& f) { f.Defragment(victim); },
      [&](FlashDevice& crashed) {
        ++crashes;
        FileSystem remounted = FileSystem::Mount(crashed);
        ASSERT_EQ(remounted.Contents(), expected);
        ASSERT_TRUE(remounted.table().reserved_sector.has_value());
        // Still writable after recovery.
        remounted.Write(B({0x42}), B({1, 2, 3}));
        FileSystem third = FileSystem::Mount(crashed);
        auto with_new = expected;
        with_new[B({0x42})] = B({1, 2, 3});
        ASSERT_EQ(third.Contents(), with_new);
      });
  EXPECT_EQ(crashes, cut_points);
  EXPECT_GT(cut_points, 30u);
}

}  // namespace
}  // namespace jcimage::flash
