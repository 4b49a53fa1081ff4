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

#include "jcimage/flash/device.h"

#include <gtest/gtest.h>

#include <filesystem>

namespace jcimage::flash {
namespace {

TEST(FlashDevice, Stm32GeometryOffsets) {
  FlashDevice device(FlashDevice::Stm32f401reGeometry());
  ASSERT_EQ(device.sector_count(), 8u);
  EXPECT_EQ(device.size(), 512u * 1024);
  EXPECT_EQ(device.sector(4).offset, 64u * 1024);
  EXPECT_EQ(device.sector(5).offset, 128u * 1024);
  EXPECT_EQ(device.sector(5).size, 128u * 1024);
  EXPECT_EQ(device.SectorOf(128 * 1024 + 5), 5u);
  EXPECT_EQ(device.reserved_sector(), 7u);
}

TEST(FlashDevice, RejectsNonPowerOfTwoSectors) {
  EXPECT_THROW(FlashDevice({1024, 1000}), InputError);
}

TEST(FlashDevice, ProgramOnlyClearsBits) {
  FlashDevice device({256, 256});
  device.ProgramByte(3, 0xF0);
  device.ProgramByte(3, 0x30);
  EXPECT_EQ(device.Read(3), 0x30);
  EXPECT_THROW(device.ProgramByte(3, 0x31), FlashError);
  EXPECT_EQ(device.Read(3), 0x30);
}

TEST(FlashDevice, EraseRestoresOnes) {
  FlashDevice device({256, 256});
  device.ProgramByte(260, 0x00);
  EXPECT_FALSE(device.IsErased(1));
  EXPECT_TRUE(device.IsErased(0));
  device.Erase(1);
  EXPECT_TRUE(device.IsErased(1));
  device.ProgramByte(260, 0x12);
  EXPECT_EQ(device.Read(260), 0x12);
}

TEST(FlashDevice, PowerLossStopsAfterBudget) {
  FlashDevice device({256});
  device.ArmPowerLoss(2);
  const Bytes data = {1, 2, 3, 4};
  EXPECT_THROW(device.Program(0, data), PowerLoss);
  EXPECT_EQ(device.Read(0), 1);
  EXPECT_EQ(device.Read(1), 2);
  EXPECT_EQ(device.Read(2), 0xFF);
}

TEST(FlashDevice, PartialEraseLeavesSecondHalf) {
  FlashDevice device({256});
  device.ProgramByte(0, 0);
  device.ProgramByte(200, 0);
  device.set_partial_erase_on_power_loss(true);
  device.ArmPowerLoss(0);
  EXPECT_THROW(device.Erase(0), PowerLoss);
  EXPECT_EQ(device.Read(0), 0xFF);
  EXPECT_EQ(device.Read(200), 0x00);
}

TEST(FlashDevice, ImageRoundTrip) {
  FlashDevice device({256, 512});
  device.ProgramByte(300, 0x5A);
  const auto path = std::filesystem::temp_directory_path() / "jcimage_device_test.bin";
  device.SaveImage(path);
  FlashDevice loaded = FlashDevice::LoadImage(path, {256, 512});
  EXPECT_EQ(loaded.Read(300), 0x5A);
  EXPECT_THROW(FlashDevice::LoadImage(path, {256}), InputError);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace jcimage::flash
