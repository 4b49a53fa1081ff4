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

#include "jcimage/flash/crc8.h"

namespace jcimage::flash {

uint8_t BlockHeader::Encode() const {
  uint8_t byte = static_cast<uint8_t>((tag_length & 0x1F) << 1);
  if (unused) byte |= kUnusedBit;
  if (valid) byte |= kValidBit;
  if (long_length) byte |= kDlBit;
  return byte;
}

BlockHeader BlockHeader::Decode(uint8_t byte) {
  return BlockHeader{
      .unused = (byte & kUnusedBit) != 0,
      .valid = (byte & kValidBit) != 0,
      .tag_length = TagLengthBits(byte),
      .long_length = (byte & kDlBit) != 0,
  };
}

uint64_t EncodedBlockSize(size_t tag_length, uint64_t data_length) {
  uint64_t length_field = data_length > 0xFF ? 4 : 1;
  return 1 + length_field + tag_length + data_length + 1;
}

uint8_t BlockHashsum(uint8_t header_byte, ByteView length_field, ByteView tag,
                     ByteView data) {
  const uint8_t masked = header_byte & static_cast<uint8_t>(~BlockHeader::kStateMask);
  uint8_t crc = Crc8Update(0, ByteView(&masked, 1));
  crc = Crc8Update(crc, length_field);
  crc = Crc8Update(crc, tag);
  return Crc8Update(crc, data);
}

Bytes EncodeBlock(ByteView tag, ByteView data, bool committed) {
  const bool long_length = data.size() > 0xFF;
  BlockHeader header{.unused = !committed,
                     .valid = true,
                     .tag_length = static_cast<uint8_t>(tag.size()),
                     .long_length = long_length};
  ByteWriter w;
  w.U1(header.Encode());
  if (long_length) {
    w.U4(static_cast<uint32_t>(data.size()));
  } else {
    w.U1(static_cast<uint32_t>(data.size()));
  }
  w.Append(tag);
  w.Append(data);
  Bytes out = std::move(w).bytes();
  const size_t length_size = long_length ? 4 : 1;
  out.push_back(BlockHashsum(out[0], ByteView(out).subspan(1, length_size), tag, data));
  return out;
}

const char* BlockStateName(BlockState state) {
  switch (state) {
    case BlockState::kLive:
      return "live";
    case BlockState::kSuperseded:
      return "superseded";
    case BlockState::kUncommitted:
      return "uncommitted";
    case BlockState::kCorrupt:
      return "corrupt";
  }
  return "?";
}

SectorScan ScanSector(const FlashDevice& device, size_t sector) {
  const Sector& s = device.sector(sector);
  SectorScan scan;
  scan.sector = sector;
  scan.write_cursor = s.end();
  ByteView cells = device.cells();
  uint32_t pos = s.offset;
  auto mark_corrupt = [&](uint32_t at) {
    scan.corrupt = true;
    scan.corrupt_at = at;
    scan.write_cursor = s.end();
  };

  while (pos < s.end()) {
    const uint8_t byte = cells[pos];
    if (byte == 0xFF) {
      for (uint32_t i = pos; i < s.end(); ++i) {
        if (cells[i] != 0xFF) {
          mark_corrupt(i);
          return scan;
        }
      }
      scan.write_cursor = pos;
      return scan;
    }
    if (byte == 0x00) {
      uint32_t end = pos;
      while (end < s.end() && cells[end] == 0x00) ++end;
      scan.erased_filler += end - pos;
      pos = end;
      continue;
    }

    const uint8_t tag_length = BlockHeader::TagLengthBits(byte);
    if (tag_length < BlockHeader::kMinTagLength || tag_length > BlockHeader::kMaxTagLength) {
      mark_corrupt(pos);
      return scan;
    }
    const bool long_length = (byte & BlockHeader::kDlBit) != 0;
    const uint32_t length_size = long_length ? 4 : 1;
    if (uint64_t{pos} + 1 + length_size > s.end()) {
      mark_corrupt(pos);
      return scan;
    }
    const uint32_t data_length =
        long_length ? ReadU4(cells, pos + 1) : uint32_t{cells[pos + 1]};
    const uint64_t total = 1 + length_size + uint64_t{tag_length} + data_length + 1;
    if (pos + total > s.end()) {
      mark_corrupt(pos);
      return scan;
    }

    ScannedBlock block;
    block.address = pos;
    block.header_byte = byte;
    block.data_length = data_length;
    block.total_size = static_cast<uint32_t>(total);
    const uint32_t tag_at = pos + 1 + length_size;
    ByteView tag = cells.subspan(tag_at, tag_length);
    ByteView data = cells.subspan(tag_at + tag_length, data_length);
    block.tag.assign(tag.begin(), tag.end());
    block.hashsum_ok = BlockHashsum(byte, cells.subspan(pos + 1, length_size), tag, data) ==
                       cells[pos + total - 1];
    const BlockHeader header = BlockHeader::Decode(byte);
    if (header.unused) {
      block.state = BlockState::kUncommitted;
    } else if (!header.valid) {
      block.state = BlockState::kSuperseded;
    } else if (!block.hashsum_ok) {
      block.state = BlockState::kCorrupt;
    } else {
      block.state = BlockState::kLive;
    }
    scan.blocks.push_back(std::move(block));
    pos += static_cast<uint32_t>(total);
  }
  scan.write_cursor = s.end();
  return scan;
}

std::vector<SectorScan> ScanDevice(const FlashDevice& device) {
  std::vector<SectorScan> scans;
  scans.reserve(device.sector_count());
  for (size_t i = 0; i < device.sector_count(); ++i) scans.push_back(ScanSector(device, i));
  return scans;
}

}  // namespace jcimage::flash
