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

#include <algorithm>
#include <bit>
#include <fstream>
#include <iterator>

namespace jcimage::flash {

FlashDevice::FlashDevice(const std::vector<uint32_t>& sector_sizes,
                         size_t reserved_sector) {
  if (sector_sizes.empty()) throw InputError("flash", "device needs at least one sector");
  uint64_t offset = 0;
  for (uint32_t size : sector_sizes) {
    if (!std::has_single_bit(size)) {
      throw InputError("flash", "sector size " + std::to_string(size) +
                                    " is not a power of two");
    }
    sectors_.push_back({static_cast<uint32_t>(offset), size});
    offset += size;
  }
  if (offset > std::numeric_limits<uint32_t>::max()) {
    throw InputError("flash", "device larger than 4 GiB");
  }
  cells_.assign(offset, 0xFF);
  reserved_sector_ = reserved_sector == kNoSector ? sectors_.size() - 1 : reserved_sector;
  if (reserved_sector_ >= sectors_.size()) {
    throw InputError("flash", "reserved sector out of range");
  }
}

std::vector<uint32_t> FlashDevice::Stm32f401reGeometry() {
  constexpr uint32_t kKiB = 1024;
  return {16 * kKiB, 16 * kKiB, 16 * kKiB, 16 * kKiB,
          64 * kKiB, 128 * kKiB, 128 * kKiB, 128 * kKiB};
}

size_t FlashDevice::SectorOf(uint32_t address) const {
  auto it = std::upper_bound(sectors_.begin(), sectors_.end(), address,
                             [](uint32_t a, const Sector& s) { return a < s.offset; });
  if (it == sectors_.begin() || address >= size()) {
    throw FlashError("address " + std::to_string(address) + " outside device");
  }
  return static_cast<size_t>(std::distance(sectors_.begin(), it) - 1);
}

void FlashDevice::set_reserved_sector(size_t sector) {
  if (sector >= sectors_.size()) throw FlashError("reserved sector out of range");
  reserved_sector_ = sector;
}

ByteView FlashDevice::Read(uint32_t address, size_t length) const {
  if (uint64_t{address} + length > cells_.size()) {
    throw FlashError("read past end of device");
  }
  return ByteView(cells_).subspan(address, length);
}

bool FlashDevice::IsErased(size_t sector) const {
  const Sector& s = sectors_.at(sector);
  auto begin = cells_.begin() + s.offset;
  return std::all_of(begin, begin + s.size, [](uint8_t b) { return b == 0xFF; });
}

void FlashDevice::CountOperation() {
  if (armed_) {
    if (budget_ == 0) {
      armed_ = false;
      throw PowerLoss{operation_count_};
    }
    --budget_;
  }
  ++operation_count_;
}

void FlashDevice::ProgramByte(uint32_t address, uint8_t value) {
  if (address >= cells_.size()) throw FlashError("program outside device");
  uint8_t current = cells_[address];
  if ((value & ~current) != 0) {
    throw FlashError("program at " + std::to_string(address) +
                     " would set a cleared bit without erase");
  }
  CountOperation();
  cells_[address] = value;
}

void FlashDevice::Program(uint32_t address, ByteView bytes) {
  for (size_t i = 0; i < bytes.size(); ++i) {
    ProgramByte(static_cast<uint32_t>(address + i), bytes[i]);
  }
}

void FlashDevice::Erase(size_t sector) {
  const Sector& s = sectors_.at(sector);
  auto begin = cells_.begin() + s.offset;
  if (armed_ && budget_ == 0 && partial_erase_) {
    std::fill(begin, begin + s.size / 2, 0xFF);
  }
  CountOperation();
  std::fill(begin, begin + s.size, 0xFF);
}

void FlashDevice::ArmPowerLoss(uint64_t operations) {
  armed_ = true;
  budget_ = operations;
}

void FlashDevice::LoadCells(ByteView cells) {
  if (cells.size() != cells_.size()) {
    throw InputError("flash", "image is " + std::to_string(cells.size()) +
                                  " bytes, device is " + std::to_string(cells_.size()));
  }
  std::copy(cells.begin(), cells.end(), cells_.begin());
}

FlashDevice FlashDevice::LoadImage(const std::filesystem::path& path,
                                   const std::vector<uint32_t>& sector_sizes,
                                   size_t reserved_sector) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open image");
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  FlashDevice device(sector_sizes, reserved_sector);
  device.LoadCells(bytes);
  return device;
}

void FlashDevice::SaveImage(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot create image");
  out.write(reinterpret_cast<const char*>(cells_.data()),
            static_cast<std::streamsize>(cells_.size()));
  if (!out) throw IoError(path.string(), "write failed");
}

}  // namespace jcimage::flash
