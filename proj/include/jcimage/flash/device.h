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
#include <filesystem>
#include <limits>
#include <vector>

#include "jcimage/error.h"
#include "jcimage/util/bytes.h"

namespace jcimage::flash {

// Raised by the device model for operations real NOR flash cannot perform,
// e.g. programming a 0 bit back to 1 without an erase.
class FlashError : public Error {
 public:
  explicit FlashError(const std::string& message) : Error("flash", message) {}
};

// Thrown from inside Program/Erase when an armed power-loss budget runs out.
// Deliberately not an Error: nothing in the library catches it.
struct PowerLoss {
  uint64_t operation;
};

struct Sector {
  uint32_t offset;
  uint32_t size;

  uint32_t end() const { return offset + size; }
};

// Simulated sectored NOR flash. Cells erase to 0xFF; programming can only clear
// bits. Every byte program and every sector erase counts as one operation for
// fault injection.
class FlashDevice {
 public:
  static constexpr size_t kNoSector = std::numeric_limits<size_t>::max();

  // Sector sizes must be powers of two. `reserved_sector` defaults to the last.
  explicit FlashDevice(const std::vector<uint32_t>& sector_sizes,
                       size_t reserved_sector = kNoSector);

  // 16, 16, 16, 16, 64, 128, 128, 128 KiB.
  static std::vector<uint32_t> Stm32f401reGeometry();

  size_t sector_count() const { return sectors_.size(); }
  const Sector& sector(size_t index) const { return sectors_.at(index); }
  const std::vector<Sector>& sectors() const { return sectors_; }
  size_t SectorOf(uint32_t address) const;
  uint32_t size() const { return static_cast<uint32_t>(cells_.size()); }

  size_t reserved_sector() const { return reserved_sector_; }
  void set_reserved_sector(size_t sector);

  uint8_t Read(uint32_t address) const { return cells_.at(address); }
  ByteView Read(uint32_t address, size_t length) const;
  ByteView cells() const { return cells_; }
  bool IsErased(size_t sector) const;

  void ProgramByte(uint32_t address, uint8_t value);
  void Program(uint32_t address, ByteView bytes);
  void Erase(size_t sector);

  // After `operations` more successful operations, the next one throws
  // PowerLoss without touching the cells (or, for an erase in partial-erase
  // mode, after erasing the first half of the sector).
  void ArmPowerLoss(uint64_t operations);
  void DisarmPowerLoss() { armed_ = false; }
  void set_partial_erase_on_power_loss(bool enabled) { partial_erase_ = enabled; }
  uint64_t operation_count() const { return operation_count_; }

  // Replaces the whole cell array (used to load images and restore snapshots).
  void LoadCells(ByteView cells);

  static FlashDevice LoadImage(const std::filesystem::path& path,
                               const std::vector<uint32_t>& sector_sizes,
                               size_t reserved_sector = kNoSector);
  void SaveImage(const std::filesystem::path& path) const;

 private:
  void CountOperation();

  std::vector<Sector> sectors_;
  Bytes cells_;
  size_t reserved_sector_;
  uint64_t operation_count_ = 0;
  uint64_t budget_ = 0;
  bool armed_ = false;
  bool partial_erase_ = false;
};

}  // namespace jcimage::flash
