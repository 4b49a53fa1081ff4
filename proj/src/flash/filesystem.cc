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

#include <algorithm>
#include <string>

namespace jcimage::flash {
namespace {

std::string TagText(ByteView tag) { return "[" + ToHex(tag) + "]"; }

}  // namespace

size_t TagHash::operator()(const Tag& tag) const noexcept {
  // FNV-1a
  uint64_t h = 0xcbf29ce484222325ULL;
  for (uint8_t b : tag) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return static_cast<size_t>(h);
}

FileSystem FileSystem::Mount(FlashDevice& device, const MountOptions& options) {
  FileSystem fs(device);
  fs.Index(ScanDevice(device), options);
  if (options.repair) {
    if (!fs.table_.reserved_sector) fs.RestoreReservedSector();
    if (fs.table_.reserved_sector) fs.CollectGarbage(options.defrag_garbage_ratio);
  }
  return fs;
}

void FileSystem::Index(const std::vector<SectorScan>& scans, const MountOptions& options) {
  table_ = MountTable{};
  table_.sectors.resize(device_->sector_count());

  std::vector<std::pair<Tag, BlockLocation>> duplicates;
  for (const SectorScan& scan : scans) {
    SectorUsage& usage = table_.sectors[scan.sector];
    usage.write_cursor = scan.write_cursor;
    usage.garbage_bytes = scan.erased_filler;
    usage.corrupt = scan.corrupt;
    if (scan.corrupt) {
      table_.corrupt_sectors.push_back(scan.sector);
      usage.garbage_bytes += device_->sector(scan.sector).end() - *scan.corrupt_at;
    }
    for (const ScannedBlock& block : scan.blocks) {
      if (block.state != BlockState::kLive) {
        usage.garbage_bytes += block.total_size;
        continue;
      }
      BlockLocation location{block.address, block.data_length, block.total_size};
      // The first live block in scan order wins; later ones are the other half
      // of an interrupted replace or defragment copy.
      if (table_.entries.contains(block.tag)) {
        duplicates.emplace_back(block.tag, location);
        usage.garbage_bytes += block.total_size;
        continue;
      }
      table_.entries.emplace(block.tag, location);
      usage.live_bytes += block.total_size;
    }
  }

  if (options.repair) {
    for (const auto& [tag, location] : duplicates) {
      const uint8_t header = device_->Read(location.address);
      device_->ProgramByte(location.address,
                           header & static_cast<uint8_t>(~BlockHeader::kValidBit));
      ++table_.repaired_duplicates;
    }
  }

  auto erased = [&](size_t i) {
    const SectorScan& scan = scans[i];
    return !scan.corrupt && scan.blocks.empty() && scan.erased_filler == 0 &&
           scan.write_cursor == device_->sector(i).offset;
  };
  const size_t preferred = device_->reserved_sector();
  if (erased(preferred)) {
    table_.reserved_sector = preferred;
  } else {
    for (size_t i = 0; i < scans.size(); ++i) {
      if (!erased(i)) continue;
      if (!table_.reserved_sector ||
          device_->sector(i).size >= device_->sector(*table_.reserved_sector).size) {
        table_.reserved_sector = i;
      }
    }
  }
  if (table_.reserved_sector) device_->set_reserved_sector(*table_.reserved_sector);
}

std::optional<uint32_t> FileSystem::Allocate(uint64_t size,
                                             std::optional<size_t> exclude) const {
  std::optional<size_t> best;
  uint64_t best_free = 0;
  for (size_t i = 0; i < table_.sectors.size(); ++i) {
    if (i == table_.reserved_sector || i == exclude || table_.sectors[i].corrupt) continue;
    const uint64_t free = device_->sector(i).end() - table_.sectors[i].write_cursor;
    if (free >= size && (!best || free > best_free)) {
      best = i;
      best_free = free;
    }
  }
  if (!best) return std::nullopt;
  return table_.sectors[*best].write_cursor;
}

void FileSystem::Invalidate(const BlockLocation& location) {
  const uint8_t header = device_->Read(location.address);
  device_->ProgramByte(location.address,
                       header & static_cast<uint8_t>(~BlockHeader::kValidBit));
  SectorUsage& usage = table_.sectors[device_->SectorOf(location.address)];
  usage.live_bytes -= location.total_size;
  usage.garbage_bytes += location.total_size;
}

BlockLocation FileSystem::WriteBlockAt(uint32_t address, ByteView tag, ByteView data,
                                       const std::optional<BlockLocation>& previous) {
  const Bytes block = EncodeBlock(tag, data, /*committed=*/false);
  const size_t sector = device_->SectorOf(address);
  SectorUsage& usage = table_.sectors[sector];
  usage.write_cursor = address + static_cast<uint32_t>(block.size());

  device_->ProgramByte(address, block[0]);
  device_->Program(address + 1, ByteView(block).subspan(1));
  device_->ProgramByte(address, block[0] & static_cast<uint8_t>(~BlockHeader::kUnusedBit));
  usage.live_bytes += static_cast<uint32_t>(block.size());

  // The superseded block loses its valid bit only after the new one is
  // committed, so at every instant at least one readable copy exists.
  if (previous) Invalidate(*previous);

  BlockLocation location{address, static_cast<uint32_t>(data.size()),
                         static_cast<uint32_t>(block.size())};
  table_.entries.insert_or_assign(Tag(tag.begin(), tag.end()), location);
  return location;
}

void FileSystem::Write(ByteView tag, ByteView data) {
  if (tag.size() < BlockHeader::kMinTagLength || tag.size() > BlockHeader::kMaxTagLength) {
    throw TagLenInvalid("tag length " + std::to_string(tag.size()) + " outside 1..30");
  }
  if (data.size() > std::numeric_limits<uint32_t>::max()) {
    throw DataTooLarge("data length exceeds 32 bits");
  }
  const uint64_t size = EncodedBlockSize(tag.size(), data.size());
  uint32_t largest = 0;
  for (const Sector& s : device_->sectors()) largest = std::max(largest, s.size);
  if (size > largest) {
    throw DataTooLarge("block of " + std::to_string(size) + " bytes exceeds the largest sector");
  }

  std::optional<uint32_t> address = Allocate(size, std::nullopt);
  while (!address) {
    if (!table_.reserved_sector) {
      throw FlashFull("no space for " + std::to_string(size) +
                      " bytes and no reserved sector to defragment into");
    }
    const uint32_t reserved_size = device_->sector(*table_.reserved_sector).size;
    std::optional<size_t> victim;
    for (size_t i = 0; i < table_.sectors.size(); ++i) {
      const SectorUsage& usage = table_.sectors[i];
      if (i == table_.reserved_sector || usage.garbage_bytes == 0) continue;
      if (usage.live_bytes > reserved_size) continue;
      if (!victim || usage.garbage_bytes > table_.sectors[*victim].garbage_bytes) victim = i;
    }
    if (!victim) {
      throw FlashFull("no space for " + std::to_string(size) + " bytes for tag " +
                      TagText(tag));
    }
    Defragment(*victim);
    address = Allocate(size, std::nullopt);
  }

  std::optional<BlockLocation> previous;
  if (auto it = table_.entries.find(Tag(tag.begin(), tag.end())); it != table_.entries.end()) {
    previous = it->second;
  }
  WriteBlockAt(*address, tag, data, previous);
}

std::vector<std::pair<Tag, BlockLocation>> FileSystem::LiveBlocksIn(size_t sector) const {
  const Sector& s = device_->sector(sector);
  std::vector<std::pair<Tag, BlockLocation>> blocks;
  for (const auto& [tag, location] : table_.entries) {
    if (location.address >= s.offset && location.address < s.end()) {
      blocks.emplace_back(tag, location);
    }
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.second.address < b.second.address; });
  return blocks;
}

void FileSystem::Defragment(size_t victim) {
  if (victim >= device_->sector_count()) throw FsError("sector out of range");
  if (!table_.reserved_sector) throw FsError("no reserved sector available");
  const size_t reserved = *table_.reserved_sector;
  if (victim == reserved) throw FsError("cannot defragment the reserved sector");
  if (!device_->IsErased(reserved)) {
    throw FsError("reserved sector " + std::to_string(reserved) + " is not erased");
  }

  const auto live = LiveBlocksIn(victim);
  uint64_t live_bytes = 0;
  for (const auto& entry : live) live_bytes += entry.second.total_size;
  const Sector& target = device_->sector(reserved);
  if (live_bytes > target.size) {
    throw ReservedTooSmall("sector " + std::to_string(victim) + " holds " +
                           std::to_string(live_bytes) + " live bytes, reserved sector " +
                           std::to_string(reserved) + " has " + std::to_string(target.size));
  }

  uint32_t cursor = target.offset;
  for (const auto& [tag, location] : live) {
    const Bytes data = ReadData(location, tag);
    cursor += WriteBlockAt(cursor, tag, data, location).total_size;
  }
  device_->Erase(victim);
  table_.sectors[victim] = SectorUsage{.write_cursor = device_->sector(victim).offset};
  std::erase(table_.corrupt_sectors, victim);
  table_.reserved_sector = victim;
  device_->set_reserved_sector(victim);
}

void FileSystem::Evacuate(size_t sector, std::optional<size_t> target) {
  for (const auto& [tag, location] : LiveBlocksIn(sector)) {
    const Bytes data = ReadData(location, tag);
    std::optional<uint32_t> address;
    if (target) {
      address = table_.sectors[*target].write_cursor;
    } else {
      address = Allocate(location.total_size, sector);
    }
    if (!address) throw FlashFull("cannot evacuate sector " + std::to_string(sector));
    WriteBlockAt(*address, tag, data, location);
  }
  device_->Erase(sector);
  table_.sectors[sector] = SectorUsage{.write_cursor = device_->sector(sector).offset};
  std::erase(table_.corrupt_sectors, sector);
}

void FileSystem::RestoreReservedSector() {
  // Happens after an interrupted defragment: the old reserved sector holds
  // some copies and the victim was never erased. Empty the sector whose live
  // blocks fit elsewhere at the lowest copy cost.
  std::vector<size_t> order(device_->sector_count());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return table_.sectors[a].live_bytes < table_.sectors[b].live_bytes;
  });

  for (size_t candidate : order) {
    std::vector<uint64_t> free(device_->sector_count(), 0);
    for (size_t i = 0; i < free.size(); ++i) {
      if (i == candidate || table_.sectors[i].corrupt) continue;
      free[i] = device_->sector(i).end() - table_.sectors[i].write_cursor;
    }
    bool fits = true;
    for (const auto& entry : LiveBlocksIn(candidate)) {
      auto best = std::max_element(free.begin(), free.end());
      if (*best < entry.second.total_size) {
        fits = false;
        break;
      }
      *best -= entry.second.total_size;
    }
    if (!fits) continue;
    Evacuate(candidate, std::nullopt);
    table_.reserved_sector = candidate;
    device_->set_reserved_sector(candidate);
    return;
  }
}

void FileSystem::CollectGarbage(double ratio) {
  for (size_t i = 0; i < table_.sectors.size(); ++i) {
    if (i == table_.reserved_sector) continue;
    const SectorUsage& usage = table_.sectors[i];
    const Sector& s = device_->sector(i);
    const bool mostly_garbage = usage.garbage_bytes > ratio * s.size;
    if (!usage.corrupt && !mostly_garbage) continue;
    if (usage.live_bytes > device_->sector(*table_.reserved_sector).size) continue;
    Defragment(i);
  }
}

Bytes FileSystem::ReadData(const BlockLocation& location, ByteView tag) const {
  const uint8_t header = device_->Read(location.address);
  const uint32_t length_size = (header & BlockHeader::kDlBit) ? 4 : 1;
  ByteView length_field = device_->Read(location.address + 1, length_size);
  const uint32_t tag_at = location.address + 1 + length_size;
  ByteView stored_tag = device_->Read(tag_at, tag.size());
  ByteView data = device_->Read(tag_at + static_cast<uint32_t>(tag.size()), location.data_length);
  const uint8_t stored_sum =
      device_->Read(tag_at + static_cast<uint32_t>(tag.size()) + location.data_length);
  if (!std::equal(tag.begin(), tag.end(), stored_tag.begin()) ||
      BlockHashsum(header, length_field, stored_tag, data) != stored_sum) {
    throw HashMismatch("block for tag " + TagText(tag) + " at " +
                       std::to_string(location.address) + " failed its hashsum");
  }
  return Bytes(data.begin(), data.end());
}

std::optional<Bytes> FileSystem::Read(ByteView tag) const {
  auto it = table_.entries.find(Tag(tag.begin(), tag.end()));
  if (it == table_.entries.end()) return std::nullopt;
  return ReadData(it->second, tag);
}

bool FileSystem::Contains(ByteView tag) const {
  return table_.entries.contains(Tag(tag.begin(), tag.end()));
}

std::map<Tag, Bytes> FileSystem::Contents() const {
  std::map<Tag, Bytes> out;
  for (const auto& [tag, location] : table_.entries) out.emplace(tag, ReadData(location, tag));
  return out;
}

uint64_t FileSystem::FreeBytes() const {
  uint64_t total = 0;
  for (size_t i = 0; i < table_.sectors.size(); ++i) {
    if (i == table_.reserved_sector || table_.sectors[i].corrupt) continue;
    total += device_->sector(i).end() - table_.sectors[i].write_cursor;
  }
  return total;
}

}  // namespace jcimage::flash
