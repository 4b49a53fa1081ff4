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
#include <set>
#include <string>
#include <vector>

#include "jcimage/cap/cap_file.h"
#include "jcimage/error.h"
#include "jcimage/flash/device.h"
#include "jcimage/image/memory_config.h"
#include "jcimage/jca/model.h"
#include "jcimage/util/bytes.h"

namespace jcimage::image {

// First tag byte.
namespace tag_kind {
inline constexpr uint8_t kPackageList = 0;
inline constexpr uint8_t kCapStructure = 1;
inline constexpr uint8_t kStaticField = 2;
inline constexpr uint8_t kAppletField = 3;
}  // namespace tag_kind

class TypeWidthMismatch : public Error {
 public:
  TypeWidthMismatch(uint8_t code, size_t length)
      : Error("image_serializer", "field type 0x" + HexByte(code) + " cannot hold " +
                                      std::to_string(length) + " value bytes") {}

 private:
  static std::string HexByte(uint8_t b) { return ToHex(ByteView(&b, 1)); }
};

class SectorOverflow : public Error {
 public:
  SectorOverflow(uint64_t required, uint64_t available)
      : Error("image_serializer", "image needs " + std::to_string(required) +
                                      " bytes, target sector holds " +
                                      std::to_string(available)),
        required_(required),
        available_(available) {}
  uint64_t required() const { return required_; }
  uint64_t available() const { return available_; }

 private:
  uint64_t required_;
  uint64_t available_;
};

struct TaggedData {
  Bytes tag;
  Bytes data;
  bool operator==(const TaggedData&) const = default;
};

// Tag [0]; bit i (LSB first within each byte) set iff package i is installed.
TaggedData EncodePackageTable(const std::set<uint8_t>& installed, size_t min_bytes = 8);

// Tag [1, pkg]. Data: one (u4 offset, u1 tag) entry per component in load
// order, then the components (tag, u2 size, info). Offsets count from the
// start of the data.
TaggedData EncodeCapBlock(uint8_t package_id, const cap::CapFile& cap);

// Inverse of the data part of EncodeCapBlock. Throws InputError.
std::vector<cap::ComponentBinary> DecodeCapBlock(ByteView data);

// Tag [2, pkg, field]; data [type code] ++ value. Throws TypeWidthMismatch.
TaggedData EncodeStaticField(uint8_t package_id, uint8_t field_no, uint8_t type_code,
                             ByteView value);

// Tag [3, pkg, class, field]. Written by the runtime, never by the image
// builder; provided so both sides share one codec.
TaggedData EncodeAppletField(uint8_t package_id, uint8_t class_no, uint8_t field_no,
                             uint8_t type_code, ByteView value);

struct DecodedField {
  uint8_t type_code = 0;
  Bytes value;
};
// Splits and checks field block data. Throws InputError or TypeWidthMismatch.
DecodedField DecodeFieldData(ByteView data);

// Static field blocks for the non-default initial values of a package, keyed
// by the field's ordinal among allocated static fields.
std::vector<TaggedData> StaticFieldBlocks(uint8_t package_id, const jca::JcaPackage& pkg);

struct ImagePackage {
  uint8_t id = 0;
  const jca::JcaPackage* source = nullptr;
  const cap::CapFile* cap = nullptr;
};

struct InitialImage {
  flash::FlashDevice device;
  std::vector<TaggedData> blocks;  // in write order
  uint64_t payload_bytes = 0;      // encoded block bytes in the target sector
};

// Package table, CAP blocks by package id, then static field blocks, all
// committed into the target sector of an otherwise erased device.
// Throws SectorOverflow.
InitialImage BuildInitialImage(const std::vector<ImagePackage>& packages,
                               const MemoryConfig& config);

}  // namespace jcimage::image
