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
#include <optional>
#include <vector>

#include "jcimage/flash/device.h"
#include "jcimage/util/bytes.h"

namespace jcimage::flash {

// Header byte layout, MSB first:
//   bit 7    unused   1 while the block is being written, 0 once committed
//   bit 6    valid    1 until a newer block with the same tag is committed
//   bits 5-1 tag length, 1..30 (0b11111 = empty cell, 0b00000 = erased)
//   bit 0    DL       0: 1-byte data length, 1: 4-byte big-endian data length
struct BlockHeader {
  static constexpr uint8_t kUnusedBit = 0x80;
  static constexpr uint8_t kValidBit = 0x40;
  static constexpr uint8_t kDlBit = 0x01;
  static constexpr uint8_t kStateMask = kUnusedBit | kValidBit;
  static constexpr uint8_t kMinTagLength = 1;
  static constexpr uint8_t kMaxTagLength = 30;

  bool unused = false;
  bool valid = true;
  uint8_t tag_length = 1;
  bool long_length = false;

  uint8_t Encode() const;
  static BlockHeader Decode(uint8_t byte);
  static uint8_t TagLengthBits(uint8_t byte) { return (byte >> 1) & 0x1F; }

  bool operator==(const BlockHeader&) const = default;
};

// Total on-flash size of a block: header, length field, tag, data, hashsum.
uint64_t EncodedBlockSize(size_t tag_length, uint64_t data_length);

// Hashsum over the header with the state bits masked, the length field, the
// tag and the data.
uint8_t BlockHashsum(uint8_t header_byte, ByteView length_field, ByteView tag,
                     ByteView data);

// Full block bytes. `committed` selects unused=0 (image generation) or unused=1
// (first phase of an atomic write).
Bytes EncodeBlock(ByteView tag, ByteView data, bool committed);

enum class BlockState {
  kLive,        // committed, valid, hashsum ok
  kSuperseded,  // committed, valid bit cleared
  kUncommitted, // unused bit still set: interrupted or aborted write
  kCorrupt,     // committed and valid but the hashsum does not match
};

const char* BlockStateName(BlockState state);

struct ScannedBlock {
  uint32_t address = 0;
  uint8_t header_byte = 0;
  uint32_t data_length = 0;
  uint32_t total_size = 0;
  bool hashsum_ok = false;
  BlockState state = BlockState::kLive;
  Bytes tag;
};

struct SectorScan {
  size_t sector = 0;
  std::vector<ScannedBlock> blocks;
  uint32_t write_cursor = 0;    // absolute address of the first free byte
  uint32_t erased_filler = 0;   // bytes skipped as 0x00 runs
  // Set when a block runs past the sector end, a header is malformed, or
  // programmed bytes follow the free region. The sector is then treated as
  // full and must be defragmented.
  bool corrupt = false;
  std::optional<uint32_t> corrupt_at;
};

// Walks one sector: blocks by parsed length, 0x00 runs skipped, first 0xFF
// header byte ends the written region.
SectorScan ScanSector(const FlashDevice& device, size_t sector);

std::vector<SectorScan> ScanDevice(const FlashDevice& device);

}  // namespace jcimage::flash
