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

#include "jcimage/cap/cap_file.h"

namespace jcimage::cap {

const char* ComponentName(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::kHeader:
      return "Header";
    case ComponentKind::kDirectory:
      return "Directory";
    case ComponentKind::kApplet:
      return "Applet";
    case ComponentKind::kImport:
      return "Import";
    case ComponentKind::kConstantPool:
      return "ConstantPool";
    case ComponentKind::kClass:
      return "Class";
    case ComponentKind::kMethod:
      return "Method";
    case ComponentKind::kStaticField:
      return "StaticField";
    case ComponentKind::kReferenceLocation:
      return "RefLocation";
    case ComponentKind::kExport:
      return "Export";
    case ComponentKind::kDescriptor:
      return "Descriptor";
  }
  return "?";
}

std::optional<ComponentKind> ComponentFromTag(uint8_t tag) {
  if (tag < 1 || tag > 11) return std::nullopt;
  return static_cast<ComponentKind>(tag);
}

const std::vector<ComponentKind>& LoadOrder() {
  static const std::vector<ComponentKind> order = {
      ComponentKind::kHeader,        ComponentKind::kDirectory,
      ComponentKind::kImport,        ComponentKind::kApplet,
      ComponentKind::kClass,         ComponentKind::kMethod,
      ComponentKind::kStaticField,   ComponentKind::kExport,
      ComponentKind::kConstantPool,  ComponentKind::kReferenceLocation,
      ComponentKind::kDescriptor,
  };
  return order;
}

Bytes ComponentBinary::Encode() const {
  ByteWriter w;
  w.U1(tag());
  w.U2(size());
  w.Append(info);
  return std::move(w).bytes();
}

std::string MethodKey(const std::string& class_name, const std::string& method_name,
                      const std::vector<jca::Type>& params) {
  std::string key = class_name + "." + method_name + "(";
  for (size_t i = 0; i < params.size(); ++i) {
    if (i) key += ",";
    key += jca::TypeText(params[i]);
  }
  return key + ")";
}

const ComponentBinary& CapFile::Get(ComponentKind kind) const {
  auto it = components.find(kind);
  if (it == components.end()) {
    throw BuildError(ComponentName(kind), "component not present in " + package_name);
  }
  return it->second;
}

std::vector<const ComponentBinary*> CapFile::InLoadOrder() const {
  std::vector<const ComponentBinary*> out;
  for (ComponentKind kind : LoadOrder()) {
    auto it = components.find(kind);
    if (it != components.end()) out.push_back(&it->second);
  }
  return out;
}

}  // namespace jcimage::cap
