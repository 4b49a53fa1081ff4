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

#include "jcimage/image/serializer.h"

#include <algorithm>

#include "jcimage/cap/builder.h"
#include "jcimage/flash/block.h"
#include "jcimage/image/field_type.h"

namespace jcimage::image {

namespace {

constexpr size_t kIndexEntrySize = 5;

void CheckWidth(uint8_t code, size_t length) {
  if (!IsValidFieldTypeCode(code)) {
    throw InputError("image_serializer", "undefined field type code " + std::to_string(code));
  }
  bool array = code & field_type::kArrayFlag;
  size_t width = FieldValueWidth(code);
  if (array) {
    if (length % width != 0) throw TypeWidthMismatch(code, length);
  } else if (width != 0 && length != width) {
    throw TypeWidthMismatch(code, length);
  }
}

TaggedData FieldBlock(Bytes tag, uint8_t type_code, ByteView value) {
  CheckWidth(type_code, value.size());
  Bytes data;
  data.reserve(1 + value.size());
  data.push_back(type_code);
  data.insert(data.end(), value.begin(), value.end());
  return {std::move(tag), std::move(data)};
}

}  // namespace

TaggedData EncodePackageTable(const std::set<uint8_t>& installed, size_t min_bytes) {
  size_t bytes = min_bytes;
  if (!installed.empty()) bytes = std::max(bytes, (size_t{*installed.rbegin()} + 8) / 8);
  Bytes bitmap(bytes, 0);
  for (uint8_t id : installed) bitmap[id / 8] |= static_cast<uint8_t>(1u << (id % 8));
  return {{tag_kind::kPackageList}, std::move(bitmap)};
}

TaggedData EncodeCapBlock(uint8_t package_id, const cap::CapFile& cap) {
  auto components = cap.InLoadOrder();
  ByteWriter index;
  Bytes body;
  const size_t base = kIndexEntrySize * components.size();
  for (const cap::ComponentBinary* c : components) {
    index.U4(static_cast<uint32_t>(base + body.size()));
    index.U1(c->tag());
    Bytes enc = c->Encode();
    body.insert(body.end(), enc.begin(), enc.end());
  }
  Bytes data = std::move(index).bytes();
  data.insert(data.end(), body.begin(), body.end());
  return {{tag_kind::kCapStructure, package_id}, std::move(data)};
}

std::vector<cap::ComponentBinary> DecodeCapBlock(ByteView data) {
  auto fail = [](const std::string& why) {
    throw InputError("image_serializer", "CAP block: " + why);
  };
  std::vector<cap::ComponentBinary> out;
  if (data.empty()) return out;
  if (data.size() < kIndexEntrySize) fail("truncated index");
  // The index ends where the first component starts.
  uint32_t first = ReadU4(data, 0);
  if (first % kIndexEntrySize != 0 || first > data.size()) fail("bad first offset");
  size_t count = first / kIndexEntrySize;
  uint32_t expect = first;
  for (size_t i = 0; i < count; ++i) {
    uint32_t offset = ReadU4(data, i * kIndexEntrySize);
    uint8_t tag = data[i * kIndexEntrySize + 4];
    if (offset != expect || offset + 3 > data.size()) fail("offset out of sequence");
    auto kind = cap::ComponentFromTag(tag);
    if (!kind || data[offset] != tag) fail("tag mismatch at entry " + std::to_string(i));
    uint16_t size = ReadU2(data, offset + 1);
    if (offset + 3 + size > data.size()) fail("component overruns block");
    cap::ComponentBinary c;
    c.kind = *kind;
    c.info.assign(data.begin() + offset + 3, data.begin() + offset + 3 + size);
    out.push_back(std::move(c));
    expect = offset + 3 + size;
  }
  if (expect != data.size()) fail("trailing bytes");
  return out;
}

TaggedData EncodeStaticField(uint8_t package_id, uint8_t field_no, uint8_t type_code,
                             ByteView value) {
  return FieldBlock({tag_kind::kStaticField, package_id, field_no}, type_code, value);
}

TaggedData EncodeAppletField(uint8_t package_id, uint8_t class_no, uint8_t field_no,
                             uint8_t type_code, ByteView value) {
  return FieldBlock({tag_kind::kAppletField, package_id, class_no, field_no}, type_code, value);
}

DecodedField DecodeFieldData(ByteView data) {
  if (data.empty()) throw InputError("image_serializer", "field block without type byte");
  DecodedField f;
  f.type_code = data[0];
  f.value.assign(data.begin() + 1, data.end());
  CheckWidth(f.type_code, f.value.size());
  return f;
}

std::vector<TaggedData> StaticFieldBlocks(uint8_t package_id, const jca::JcaPackage& pkg) {
  std::vector<TaggedData> blocks;
  for (const cap::StaticFieldSlot& slot : cap::LayoutStaticFields(pkg)) {
    const jca::JcaField& f = *slot.field;
    // Object statics start null; only arrays with initializers and non-zero
    // primitives have a value to store.
    if (!slot.non_default || !f.initializer) continue;
    if (slot.ordinal > 0xFF) {
      throw InputError("image_serializer",
                       pkg.name + ": static field " + f.name + " has number above 255");
    }
    Bytes value;
    for (int64_t v : f.initializer->values) {
      Bytes b = cap::PrimitiveBytes(f.type.kind, v);
      value.insert(value.end(), b.begin(), b.end());
    }
    blocks.push_back(EncodeStaticField(package_id, static_cast<uint8_t>(slot.ordinal),
                                       FieldTypeCode(f.type, f.is_transient), value));
  }
  return blocks;
}

InitialImage BuildInitialImage(const std::vector<ImagePackage>& packages,
                               const MemoryConfig& config) {
  config.Validate();
  std::vector<const ImagePackage*> ordered;
  std::set<uint8_t> ids;
  for (const ImagePackage& p : packages) {
    if (!ids.insert(p.id).second) {
      throw InputError("image_serializer", "package id " + std::to_string(p.id) + " used twice");
    }
    ordered.push_back(&p);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const ImagePackage* a, const ImagePackage* b) { return a->id < b->id; });

  std::vector<TaggedData> blocks;
  blocks.push_back(EncodePackageTable(ids, config.bitmap_min));
  for (const ImagePackage* p : ordered) blocks.push_back(EncodeCapBlock(p->id, *p->cap));
  for (const ImagePackage* p : ordered) {
    for (TaggedData& b : StaticFieldBlocks(p->id, *p->source)) blocks.push_back(std::move(b));
  }

  flash::FlashDevice device(config.sector_sizes, config.reserved_sector);
  const flash::Sector& target = device.sector(config.target_sector);
  uint64_t required = 0;
  for (const TaggedData& b : blocks) required += flash::EncodedBlockSize(b.tag.size(), b.data.size());
  if (required > target.size) throw SectorOverflow(required, target.size);

  uint32_t at = target.offset;
  for (const TaggedData& b : blocks) {
    Bytes enc = flash::EncodeBlock(b.tag, b.data, /*committed=*/true);
    device.Program(at, enc);
    at += static_cast<uint32_t>(enc.size());
  }
  return InitialImage{std::move(device), std::move(blocks), required};
}

}  // namespace jcimage::image
