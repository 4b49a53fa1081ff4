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
#include <string>
#include <vector>

#include "jcimage/error.h"
#include "jcimage/jca/model.h"
#include "jcimage/jca/natives.h"

namespace jcimage::jni {

// Two natives map to the same macro or function name.
class NameCollision : public Error {
 public:
  explicit NameCollision(const std::string& name)
      : Error("dispatcher_gen", "native name collision on " + name), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

// (package, class, method) tokens of the first method the runtime calls.
struct EntryPoint {
  uint8_t package_token = 0;
  uint8_t class_token = 0;
  uint8_t method_token = 0;
  bool operator==(const EntryPoint&) const = default;
};

struct EntryPointNames {
  std::string package_name;
  std::string class_name;
  std::string method_name;
};

// Looks the names up in the parsed corpus. The method must be static and its
// name unique among the class's static methods. `package_ids[i]` is the id of
// `packages[i]`. Throws InputError.
EntryPoint ResolveEntryPoint(const std::vector<const jca::JcaPackage*>& packages,
                             const std::vector<uint8_t>& package_ids,
                             const EntryPointNames& names);

struct PopOp {
  size_t param = 0;        // declaration position
  std::string c_type;      // jbyte_t, jshort_t, ...
  std::string operation;   // pop_Byte, pop_Short, ...
};

// Stack pops for a parameter list, last parameter first.
std::vector<PopOp> PopSequence(const std::vector<jca::Type>& params);

// C value type name and stack push op for a return type ("" for void).
std::string CTypeName(const jca::Type& type);
std::string PushOperation(const jca::Type& type);

struct GeneratorOptions {
  // Pop the receiver of instance natives and pass it first. Off by default.
  bool pop_receiver = false;
  std::string generator_version = JCIMAGE_VERSION;
};

// Upper-case index macro, e.g. MYCLASS_MYNATIVEMETHOD.
std::string IndexMacroName(const jca::NativeMethod& m);
// Host function name, e.g. MyClass_myNativeMethod.
std::string FunctionName(const jca::NativeMethod& m);

// The jni.h text: entry-point defines, extern declarations, index macros, the
// dispatcher and a trailing count macro.
std::string GenerateHeader(const jca::NativeMethodTable& table, const EntryPoint& entry,
                           const GeneratorOptions& options = {});

}  // namespace jcimage::jni
