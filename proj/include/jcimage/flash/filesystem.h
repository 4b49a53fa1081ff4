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
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "jcimage/flash/block.h"
#include "jcimage/flash/device.h"
#include "jcimage/util/bytes.h"

namespace jcimage::flash {

class FsError : public Error {
 public:
  explicit FsError(const std::string& message) : Error("flash_fs", message) {}
};

class FlashFull : public FsError {
 public:
  using FsError::FsError;
};
class TagLenInvalid : public FsError {
 public:
  using FsError::FsError;
};
class DataTooLarge : public FsError {
 public:
  using FsError::FsError;
};
class HashMismatch : public FsError {
 public:
  using FsError::FsError;
};
class ReservedTooSmall : public FsError {
 public:
  using FsError::FsError;
};

using Tag = Bytes;

struct TagHash {
  size_t operator()(const Tag& tag) const noexcept;
};

struct BlockLocation {
  uint32_t address = 0;
  uint32_t data_length = 0;
  uint32_t total_size = 0;
};

struct SectorUsage {
  uint32_t write_cursor = 0;
  uint32_t live_bytes = 0;
  uint32_t garbage_bytes = 0;
  bool corrupt = false;
};

// RAM-only index rebuilt from the device at every mount.
struct MountTable {
  std::unordered_map<Tag, BlockLocation, TagHash> entries;
  std::vector<SectorUsage> sectors;
  std::optional<size_t> reserved_sector;
  // Sectors whose scan hit a block running past the sector end.
  std::vector<size_t> corrupt_sectors;
  // Duplicate committed blocks whose valid bit mount cleared.
  uint32_t repaired_duplicates = 0;
};

struct MountOptions {
  // Clear the valid bit of duplicate live blocks, restore a reserved sector
  // when none is erased, and defragment sectors that are mostly garbage.
  // Off for read-only inspection.
  bool repair = true;
  double defrag_garbage_ratio = 0.5;
};

// Tagged log-structured store over a FlashDevice. The object holds a pointer to
// the device; the device must outlive it. Single writer, externally
// synchronized.
class FileSystem {
 public:
  static FileSystem Mount(FlashDevice& device, const MountOptions& options = {});

  std::optional<Bytes> Read(ByteView tag) const;
  bool Contains(ByteView tag) const;

  // Atomic replace. Throws TagLenInvalid, DataTooLarge, FlashFull.
  void Write(ByteView tag, ByteView data);

  // Moves the live blocks of `victim` into the reserved sector, erases the
  // victim and makes it the new reserved sector.
  void Defragment(size_t victim);

  const MountTable& table() const { return table_; }
  const FlashDevice& device() const { return *device_; }

  // Every (tag, data) pair currently readable, ordered by tag.
  std::map<Tag, Bytes> Contents() const;

  // Free bytes in sectors available for writes (reserved excluded).
  uint64_t FreeBytes() const;

 private:
  explicit FileSystem(FlashDevice& device) : device_(&device) {}

  void Index(const std::vector<SectorScan>& scans, const MountOptions& options);
  void RestoreReservedSector();
  void CollectGarbage(double ratio);

  std::optional<uint32_t> Allocate(uint64_t size, std::optional<size_t> exclude) const;
  // Runs the write protocol at `address` and supersedes `previous`.
  BlockLocation WriteBlockAt(uint32_t address, ByteView tag, ByteView data,
                             const std::optional<BlockLocation>& previous);
  void Invalidate(const BlockLocation& location);
  void Evacuate(size_t sector, std::optional<size_t> target);
  std::vector<std::pair<Tag, BlockLocation>> LiveBlocksIn(size_t sector) const;
  Bytes ReadData(const BlockLocation& location, ByteView tag) const;

  FlashDevice* device_;
  MountTable table_;
};

}  // namespace jcimage::flash
