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

#include "jcimage/jca/model.h"

namespace jcimage::image {

// Type byte stored in front of every serialized field value.
namespace field_type {
inline constexpr uint8_t kByte = 0;
inline constexpr uint8_t kBoolean = 1;
inline constexpr uint8_t kShort = 2;
inline constexpr uint8_t kInt = 3;
inline constexpr uint8_t kObject = 4;

inline constexpr uint8_t kArrayFlag = 1 << 7;
inline constexpr uint8_t kTransientFlag = 1 << 6;  // only together with kArrayFlag

inline constexpr uint8_t kArrayByte = kArrayFlag | kByte;
inline constexpr uint8_t kArrayBoolean = kArrayFlag | kBoolean;
inline constexpr uint8_t kArrayShort = kArrayFlag | kShort;
inline constexpr uint8_t kArrayInt = kArrayFlag | kInt;
inline constexpr uint8_t kArrayObject = kArrayFlag | kObject;

inline constexpr uint8_t kTransientArrayByte = kTransientFlag | kArrayByte;
inline constexpr uint8_t kTransientArrayBoolean = kTransientFlag | kArrayBoolean;
inline constexpr uint8_t kTransientArrayShort = kTransientFlag | kArrayShort;
inline constexpr uint8_t kTransientArrayInt = kTransientFlag | kArrayInt;
inline constexpr uint8_t kTransientArrayObject = kTransientFlag | kArrayObject;
}  // namespace field_type

// Code for a declared field type. Throws InputError for void or a transient
// non-array.
uint8_t FieldTypeCode(const jca::Type& type, bool transient = false);

// True for codes the table above defines.
bool IsValidFieldTypeCode(uint8_t code);

// Bytes per value (or per array element): 1, 2, 4, or 2 for references.
// Scalar objects have no fixed width and return 0.
size_t FieldValueWidth(uint8_t code);

}  // namespace jcimage::image
