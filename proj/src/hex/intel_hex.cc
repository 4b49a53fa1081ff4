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

#include "jcimage/hex/intel_hex.h"

#include <cstdio>
#include <optional>

namespace jcimage::hex {

uint8_t RecordChecksum(ByteView bytes) {
  uint8_t sum = 0;
  for (uint8_t b : bytes) sum = static_cast<uint8_t>(sum + b);
  return static_cast<uint8_t>(-sum);
}

std::string FormatRecord(RecordType type, uint16_t address, ByteView payload) {
  ByteWriter w;
  w.U1(static_cast<uint32_t>(payload.size()));
  w.U2(address);
  w.U1(static_cast<uint32_t>(type));
  w.Append(payload);
  const Bytes& body = w.bytes();
  std::string line = ":";
  line.reserve(1 + 2 * (body.size() + 1));
  char buf[3];
  for (uint8_t b : body) {
    std::snprintf(buf, sizeof buf, "%02X", b);
    line += buf;
  }
  std::snprintf(buf, sizeof buf, "%02X", RecordChecksum(body));
  line += buf;
  return line;
}

std::string EncodeHex(ByteView image, uint32_t base_address) {
  std::string out;
  std::optional<uint16_t> upper;
  size_t i = 0;
  while (i < image.size()) {
    if (image[i] == 0xFF) {
      ++i;
      continue;
    }
    const uint32_t address = base_address + static_cast<uint32_t>(i);
    const auto high = static_cast<uint16_t>(address >> 16);
    if (upper != high) {
      const uint8_t ela[2] = {static_cast<uint8_t>(high >> 8), static_cast<uint8_t>(high)};
      out += FormatRecord(RecordType::kExtendedLinearAddress, 0, ela);
      out += '\n';
      upper = high;
    }
    // Stop at the payload limit, the next 64 KiB boundary or an 0xFF run.
    const size_t to_boundary = 0x10000 - (address & 0xFFFF);
    size_t end = i;
    while (end < image.size() && end - i < kRecordPayload && end - i < to_boundary &&
           image[end] != 0xFF) {
      ++end;
    }
    out += FormatRecord(RecordType::kData, static_cast<uint16_t>(address & 0xFFFF),
                        image.subspan(i, end - i));
    out += '\n';
    i = end;
  }
  out += FormatRecord(RecordType::kEndOfFile, 0, {});
  out += '\n';
  return out;
}

namespace {

int Nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

SparseImage DecodeHex(std::string_view text) {
  SparseImage image;
  uint32_t upper = 0;
  size_t line_no = 0;
  bool seen_eof = false;
  while (!text.empty()) {
    const size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (seen_eof) throw MalformedRecord(line_no, "record after end-of-file");
    if (line[0] != ':' || line.size() < 11 || (line.size() - 1) % 2 != 0) {
      throw MalformedRecord(line_no, "bad record framing");
    }
    Bytes bytes;
    for (size_t i = 1; i < line.size(); i += 2) {
      const int hi = Nibble(line[i]);
      const int lo = Nibble(line[i + 1]);
      if (hi < 0 || lo < 0) throw MalformedRecord(line_no, "non-hex character");
      bytes.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    const size_t count = bytes[0];
    if (bytes.size() != count + 5) throw MalformedRecord(line_no, "byte count mismatch");
    if (RecordChecksum(ByteView(bytes).first(bytes.size() - 1)) != bytes.back()) {
      throw ChecksumMismatch(line_no, "record checksum mismatch");
    }
    const uint16_t offset = ReadU2(bytes, 1);
    ByteView payload = ByteView(bytes).subspan(4, count);
    switch (static_cast<RecordType>(bytes[3])) {
      case RecordType::kData:
        for (size_t i = 0; i < count; ++i) {
          image[(upper << 16) + offset + static_cast<uint32_t>(i)] = payload[i];
        }
        break;
      case RecordType::kEndOfFile:
        if (count != 0) throw MalformedRecord(line_no, "end-of-file record with payload");
        seen_eof = true;
        break;
      case RecordType::kExtendedLinearAddress:
        if (count != 2) throw MalformedRecord(line_no, "extended address needs 2 bytes");
        upper = ReadU2(payload, 0);
        break;
      default:
        throw MalformedRecord(line_no, "unsupported record type");
    }
  }
  if (!seen_eof) throw MalformedRecord(line_no, "missing end-of-file record");
  return image;
}

}  // namespace jcimage::hex
