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

#include "jcimage/jca/natives.h"

namespace jcimage::jca {

std::optional<uint16_t> NativeMethodTable::IndexOf(const std::string& package_name,
                                                   const std::string& class_name,
                                                   const std::string& method_name,
                                                   const std::vector<Type>& params) const {
  for (const NativeMethod& n : entries) {
    if (n.package_name == package_name && n.class_name == class_name &&
        n.method_name == method_name && n.params == params) {
      return n.index;
    }
  }
  return std::nullopt;
}

NativeMethodTable CollectNativeMethods(const std::vector<const JcaPackage*>& packages,
                                       const std::vector<uint8_t>& package_ids) {
  if (!package_ids.empty() && package_ids.size() != packages.size()) {
    throw InputError("jca_frontend", "package id list does not match package list");
  }
  size_t count = 0;
  for (const JcaPackage* pkg : packages) {
    for (const JcaClass& cls : pkg->classes) {
      for (const JcaMethod& m : cls.methods) count += m.is_native ? 1 : 0;
    }
  }
  if (count > kMaxNativeMethods) throw TooManyNatives(count);

  NativeMethodTable table;
  table.entries.reserve(count);
  for (size_t p = 0; p < packages.size(); ++p) {
    const JcaPackage& pkg = *packages[p];
    for (const JcaClass& cls : pkg.classes) {
      for (const JcaMethod& m : cls.methods) {
        if (!m.is_native) continue;
        NativeMethod n;
        n.index = static_cast<uint16_t>(table.entries.size());
        n.package_id = package_ids.empty() ? static_cast<uint8_t>(p) : package_ids[p];
        n.package_name = pkg.name;
        n.class_name = cls.name;
        n.method_name = m.name;
        n.params = m.params;
        n.param_names = m.param_names;
        n.return_type = m.return_type;
        n.is_static = m.is_static;
        table.entries.push_back(std::move(n));
      }
    }
  }
  return table;
}

}  // namespace jcimage::jca
