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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jcimage/util/bytes.h"

namespace jcimage::jca {

// (package token, class token): a class in an imported package. The package
// token is the position of the import in `.imports`.
struct ExternalClass {
  uint8_t package_token = 0;
  uint8_t class_token = 0;
  bool operator==(const ExternalClass&) const = default;
};

// Internal classes are referenced by name, external ones by tokens.
using ClassTarget = std::variant<std::string, ExternalClass>;

std::string ClassTargetText(const ClassTarget& target);

struct Type {
  enum class Kind { kVoid, kByte, kBoolean, kShort, kInt, kReference };

  Kind kind = Kind::kVoid;
  bool array = false;
  ClassTarget reference;  // meaningful for kReference only

  static Type Void() { return {}; }
  static Type Primitive(Kind kind, bool array = false) { return {kind, array, {}}; }
  static Type Reference(ClassTarget target, bool array = false) {
    return {Kind::kReference, array, std::move(target)};
  }

  bool is_void() const { return kind == Kind::kVoid; }
  bool is_reference_like() const { return array || kind == Kind::kReference; }
  // Operand stack words: int takes two, void none, everything else one.
  int Words() const;

  bool operator==(const Type&) const = default;
};

std::string TypeText(const Type& type);

struct Version {
  uint8_t major = 1;
  uint8_t minor = 0;
  bool operator==(const Version&) const = default;
};

struct ImportEntry {
  Bytes aid;
  Version version;
  uint8_t local_token = 0;
  bool operator==(const ImportEntry&) const = default;
};

struct AppletDecl {
  Bytes aid;
  std::string class_name;
  bool operator==(const AppletDecl&) const = default;
};

// Constant pool tags as encoded in the ConstantPool component.
enum class CpKind : uint8_t {
  kClassRef = 1,
  kInstanceFieldRef = 2,
  kVirtualMethodRef = 3,
  kSuperMethodRef = 4,
  kStaticFieldRef = 5,
  kStaticMethodRef = 6,
};

const char* CpKindKeyword(CpKind kind);
bool IsMethodRef(CpKind kind);
bool IsFieldRef(CpKind kind);

struct InternalMember {
  std::string class_name;
  std::string member_name;
  bool operator==(const InternalMember&) const = default;
};

struct ExternalMember {
  uint8_t package_token = 0;
  uint8_t class_token = 0;
  uint8_t member_token = 0;
  bool operator==(const ExternalMember&) const = default;
};

struct CpEntry {
  CpKind kind = CpKind::kClassRef;
  ClassTarget class_target;                             // kClassRef
  std::variant<InternalMember, ExternalMember> member;  // field and method refs
  Type field_type;                                      // field refs
  Type return_type;                                     // method refs
  std::vector<Type> params;                             // method refs

  // True when the entry resolves inside the current package.
  bool internal() const;
  // Import token of an external entry.
  std::optional<uint8_t> import_token() const;

  bool operator==(const CpEntry&) const = default;
};

enum class Access { kPublic, kProtected, kPackage, kPrivate };

const char* AccessKeyword(Access access);

struct FieldInitializer {
  bool array = false;
  std::vector<int64_t> values;
  bool operator==(const FieldInitializer&) const = default;
};

struct JcaField {
  Access access = Access::kPackage;
  bool is_static = false;
  bool is_final = false;
  bool is_transient = false;
  Type type;
  std::string name;
  std::optional<uint8_t> token;
  std::optional<FieldInitializer> initializer;
  bool operator==(const JcaField&) const = default;
};

struct MethodSelector {
  std::string name;
  std::vector<Type> params;
  bool operator==(const MethodSelector&) const = default;
};

struct InterfaceImpl {
  ClassTarget interface;
  // For each interface method token, the implementing virtual method token.
  std::vector<uint8_t> method_tokens;
  bool operator==(const InterfaceImpl&) const = default;
};

struct Operand {
  enum class Kind { kImmediate, kLabel };
  Kind kind = Kind::kImmediate;
  int64_t value = 0;
  std::string label;

  static Operand Immediate(int64_t v) { return {Kind::kImmediate, v, {}}; }
  static Operand Label(std::string l) { return {Kind::kLabel, 0, std::move(l)}; }
  bool operator==(const Operand&) const = default;
};

struct Instruction {
  std::vector<std::string> labels;
  std::string mnemonic;
  std::vector<Operand> operands;
  bool operator==(const Instruction&) const = default;
};

struct ExceptionHandler {
  std::string start_label;
  std::string end_label;  // exclusive
  std::string handler_label;
  uint16_t catch_type = 0;  // constant pool index of a classRef; 0 catches all
  bool operator==(const ExceptionHandler&) const = default;
};

struct JcaMethod {
  Access access = Access::kPackage;
  bool is_abstract = false;
  bool is_static = false;
  bool is_final = false;
  bool is_native = false;
  Type return_type;
  std::string name;
  std::vector<Type> params;
  std::vector<std::string> param_names;  // empty strings when unnamed
  std::optional<uint8_t> token;
  std::optional<uint8_t> max_stack;
  std::optional<uint8_t> max_locals;
  std::optional<uint8_t> declared_nargs;
  bool has_body = false;
  std::vector<Instruction> body;
  std::vector<ExceptionHandler> handlers;
  std::vector<std::string> trailing_labels;  // labels after the last instruction

  // Argument words including the receiver of instance methods.
  int Nargs() const;
  bool is_constructor() const { return name == "<init>"; }
  MethodSelector selector() const { return {name, params}; }

  bool operator==(const JcaMethod&) const = default;
};

struct JcaClass {
  std::string name;
  Access access = Access::kPackage;
  bool is_abstract = false;
  bool is_final = false;
  bool is_interface = false;
  bool is_shareable = false;  // interfaces extending Shareable
  bool is_remote = false;     // interfaces extending Remote
  std::optional<uint8_t> token;
  std::optional<ClassTarget> superclass;     // classes
  std::vector<ClassTarget> superinterfaces;  // interfaces
  std::vector<ClassTarget> shareable_interfaces;
  std::vector<ClassTarget> remote_interfaces;
  std::vector<JcaField> fields;
  uint8_t public_method_table_base = 0;
  std::vector<MethodSelector> public_method_table;
  uint8_t package_method_table_base = 0;
  std::vector<MethodSelector> package_method_table;
  std::vector<InterfaceImpl> interface_impls;
  std::vector<JcaMethod> methods;

  const JcaMethod* FindMethod(const std::string& name, const std::vector<Type>& params) const;
  const JcaField* FindField(const std::string& name) const;

  bool operator==(const JcaClass&) const = default;
};

struct JcaPackage {
  std::string name;
  Bytes aid;
  Version version;
  std::vector<ImportEntry> imports;
  std::vector<AppletDecl> applets;
  std::vector<CpEntry> constant_pool;
  std::vector<JcaClass> classes;

  const JcaClass* FindClass(const std::string& name) const;
  size_t ClassIndex(const std::string& name) const;

  bool operator==(const JcaPackage&) const = default;
};

}  // namespace jcimage::jca
