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

#include "jcimage/image/field_type.h"

#include "jcimage/error.h"

namespace jcimage::image {

using jca::Type;

uint8_t FieldTypeCode(const Type& type, bool transient) {
  uint8_t base = 0;
  switch (type.kind) {
    case Type::Kind::kByte:
      base = field_type::kByte;
      break;
    case Type::Kind::kBoolean:
      base = field_type::kBoolean;
      break;
    case Type::Kind::kShort:
      base = field_type::kShort;
      break;
    case Type::Kind::kInt:
      base = field_type::kInt;
      break;
    case Type::Kind::kReference:
      base = field_type::kObject;
      break;
    case Type::Kind::kVoid:
      throw InputError("image_serializer", "void has no field type");
  }
  if (!type.array) {
    if (transient) throw InputError("image_serializer", "only arrays can be transient");
    return base;
  }
  return static_cast<uint8_t>(base | field_type::kArrayFlag |
                              (transient ? field_type::kTransientFlag : 0));
}

bool IsValidFieldTypeCode(uint8_t code) {
  uint8_t base = code & 0x3F;
  if (base > field_type::kObject) return false;
  bool array = code & field_type::kArrayFlag;
  bool transient = code & field_type::kTransientFlag;
  return array || !transient;
}

size_t FieldValueWidth(uint8_t code) {
  switch (code & 0x3F) {
    case field_type::kByte:
    case field_type::kBoolean:
      return 1;
    case field_type::kShort:
      return 2;
    case field_type::kInt:
      return 4;
    default:
      return (code & field_type::kArrayFlag) ? 2 : 0;
  }
}

}  // namespace jcimage::image
