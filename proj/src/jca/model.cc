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

#include "jcimage/jca/model.h"

#include <algorithm>

namespace jcimage::jca {

std::string ClassTargetText(const ClassTarget& target) {
  if (const auto* name = std::get_if<std::string>(&target)) return *name;
  const auto& ext = std::get<ExternalClass>(target);
  return std::to_string(ext.package_token) + "." + std::to_string(ext.class_token);
}

int Type::Words() const {
  if (array) return 1;
  switch (kind) {
    case Kind::kVoid:
      return 0;
    case Kind::kInt:
      return 2;
    default:
      return 1;
  }
}

std::string TypeText(const Type& type) {
  std::string base;
  switch (type.kind) {
    case Type::Kind::kVoid:
      base = "void";
      break;
    case Type::Kind::kByte:
      base = "byte";
      break;
    case Type::Kind::kBoolean:
      base = "boolean";
      break;
    case Type::Kind::kShort:
      base = "short";
      break;
    case Type::Kind::kInt:
      base = "int";
      break;
    case Type::Kind::kReference:
      base = ClassTargetText(type.reference);
      break;
  }
  return type.array ? base + "[]" : base;
}

const char* CpKindKeyword(CpKind kind) {
  switch (kind) {
    case CpKind::kClassRef:
      return "classRef";
    case CpKind::kInstanceFieldRef:
      return "instanceFieldRef";
    case CpKind::kVirtualMethodRef:
      return "virtualMethodRef";
    case CpKind::kSuperMethodRef:
      return "superMethodRef";
    case CpKind::kStaticFieldRef:
      return "staticFieldRef";
    case CpKind::kStaticMethodRef:
      return "staticMethodRef";
  }
  return "?";
}

bool IsMethodRef(CpKind kind) {
  return kind == CpKind::kVirtualMethodRef || kind == CpKind::kSuperMethodRef ||
         kind == CpKind::kStaticMethodRef;
}

bool IsFieldRef(CpKind kind) {
  return kind == CpKind::kInstanceFieldRef || kind == CpKind::kStaticFieldRef;
}

bool CpEntry::internal() const {
  if (kind == CpKind::kClassRef) return std::holds_alternative<std::string>(class_target);
  return std::holds_alternative<InternalMember>(member);
}

std::optional<uint8_t> CpEntry::import_token() const {
  if (kind == CpKind::kClassRef) {
    if (const auto* ext = std::get_if<ExternalClass>(&class_target)) return ext->package_token;
    return std::nullopt;
  }
  if (const auto* ext = std::get_if<ExternalMember>(&member)) return ext->package_token;
  return std::nullopt;
}

const char* AccessKeyword(Access access) {
  switch (access) {
    case Access::kPublic:
      return "public";
    case Access::kProtected:
      return "protected";
    case Access::kPackage:
      return "package";
    case Access::kPrivate:
      return "private";
  }
  return "?";
}

int JcaMethod::Nargs() const {
  int words = is_static ? 0 : 1;
  for (const Type& t : params) words += t.Words();
  return words;
}

const JcaMethod* JcaClass::FindMethod(const std::string& method_name,
                                      const std::vector<Type>& method_params) const {
  for (const JcaMethod& m : methods) {
    if (m.name == method_name && m.params == method_params) return &m;
  }
  return nullptr;
}

const JcaField* JcaClass::FindField(const std::string& field_name) const {
  for (const JcaField& f : fields) {
    if (f.name == field_name) return &f;
  }
  return nullptr;
}

const JcaClass* JcaPackage::FindClass(const std::string& class_name) const {
  for (const JcaClass& c : classes) {
    if (c.name == class_name) return &c;
  }
  return nullptr;
}

size_t JcaPackage::ClassIndex(const std::string& class_name) const {
  for (size_t i = 0; i < classes.size(); ++i) {
    if (classes[i].name == class_name) return i;
  }
  return classes.size();
}

}  // namespace jcimage::jca
