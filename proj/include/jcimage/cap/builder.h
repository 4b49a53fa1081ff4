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

#include <map>
#include <vector>

#include "jcimage/cap/cap_file.h"
#include "jcimage/jca/model.h"
#include "jcimage/jca/natives.h"

namespace jcimage::cap {

struct BuildOptions {
  // Packages of the same corpus keyed by AID. External references into these
  // packages are checked against their declared tokens.
  std::map<Bytes, const jca::JcaPackage*> corpus;
};

CapFile BuildCap(const jca::JcaPackage& pkg, const jca::NativeMethodTable& natives,
                 const BuildOptions& options = {});

// [sspush index, impdep1, <return for the declared type>]
std::vector<jca::Instruction> InjectNativeStub(const jca::JcaMethod& method, uint16_t index);

// One allocated static field and its place in the static field image.
struct StaticFieldSlot {
  std::string class_name;
  const jca::JcaField* field = nullptr;
  uint16_t ordinal = 0;  // position among allocated static fields of the package
  uint16_t offset = 0;   // byte offset in the static field image
  bool non_default = false;
};

// Allocated static fields in ordinal order (class order, then declaration
// order) with their image offsets.
std::vector<StaticFieldSlot> LayoutStaticFields(const jca::JcaPackage& pkg);

// Big-endian bytes of a primitive value of the given type.
Bytes PrimitiveBytes(jca::Type::Kind kind, int64_t value);

}  // namespace jcimage::cap
