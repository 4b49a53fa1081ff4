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
#include <string>
#include <string_view>

#include "jcimage/error.h"
#include "jcimage/util/bytes.h"

namespace jcimage::hex {

class HexError : public InputError {
 public:
  HexError(size_t line, const std::string& message)
      : InputError("hex_io", "line " + std::to_string(line) + ": " + message), line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

class ChecksumMismatch : public HexError {
 public:
  using HexError::HexError;
};

class MalformedRecord : public HexError {
 public:
  using HexError::HexError;
};

enum class RecordType : uint8_t {
  kData = 0x00,
  kEndOfFile = 0x01,
  kExtendedLinearAddress = 0x04,
};

inline constexpr uint32_t kStm32FlashBase = 0x08000000;
inline constexpr size_t kRecordPayload = 16;

// Two's complement of the low byte of the sum of `bytes`.
uint8_t RecordChecksum(ByteView bytes);

// One record line without the trailing newline, e.g. ":00000001FF".
std::string FormatRecord(RecordType type, uint16_t address, ByteView payload);

// Encodes `image` as if loaded at `base_address`. Runs of 0xFF are skipped;
// data records carry at most 16 bytes and never straddle a 64 KiB boundary.
// Lines end with LF, hex digits are uppercase.
std::string EncodeHex(ByteView image, uint32_t base_address);

using SparseImage = std::map<uint32_t, uint8_t>;

// Absolute address -> byte. Throws ChecksumMismatch / MalformedRecord.
SparseImage DecodeHex(std::string_view text);

}  // namespace jcimage::hex
