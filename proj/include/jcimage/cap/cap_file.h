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
#include <optional>
#include <string>
#include <vector>

#include "jcimage/error.h"
#include "jcimage/jca/model.h"
#include "jcimage/util/bytes.h"

namespace jcimage::cap {

// Raised when a component cannot be built. `component` names the component
// being built, the message names the dependency that failed.
class BuildError : public Error {
 public:
  BuildError(std::string component, const std::string& message)
      : Error("cap_builder", component + ": " + message), component_(std::move(component)) {}
  const std::string& component() const { return component_; }

 private:
  std::string component_;
};

enum class ComponentKind : uint8_t {
  kHeader = 1,
  kDirectory = 2,
  kApplet = 3,
  kImport = 4,
  kConstantPool = 5,
  kClass = 6,
  kMethod = 7,
  kStaticField = 8,
  kReferenceLocation = 9,
  kExport = 10,
  kDescriptor = 11,
};

inline constexpr size_t kDirectorySlots = 12;  // tags 1..12, Debug is 12

const char* ComponentName(ComponentKind kind);
std::optional<ComponentKind> ComponentFromTag(uint8_t tag);

// Order in which a card loads components.
const std::vector<ComponentKind>& LoadOrder();

struct ComponentBinary {
  ComponentKind kind = ComponentKind::kHeader;
  Bytes info;

  uint8_t tag() const { return static_cast<uint8_t>(kind); }
  uint16_t size() const { return static_cast<uint16_t>(info.size()); }
  // tag, u2 size, info
  Bytes Encode() const;
};

// (class, method) -> offset of the method_info inside the Method component
// info. Keys come from MethodKey.
using MethodOffsetMap = std::map<std::string, uint16_t>;

std::string MethodKey(const std::string& class_name, const std::string& method_name,
                      const std::vector<jca::Type>& params);

struct CapFile {
  std::string package_name;
  Bytes package_aid;
  jca::Version package_version;
  std::map<ComponentKind, ComponentBinary> components;
  MethodOffsetMap method_offsets;
  // Byte offsets of constant-pool operands inside the Method component info.
  std::vector<uint32_t> byte_index_operands;
  std::vector<uint32_t> byte2_index_operands;
  bool uses_impdep = false;

  bool Has(ComponentKind kind) const { return components.count(kind) != 0; }
  const ComponentBinary& Get(ComponentKind kind) const;
  // Present components in load order.
  std::vector<const ComponentBinary*> InLoadOrder() const;
};

}  // namespace jcimage::cap
