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
#include <vector>

#include "jcimage/error.h"
#include "jcimage/jca/model.h"

namespace jcimage::jca {

inline constexpr size_t kMaxNativeMethods = 65535;

class TooManyNatives : public InputError {
 public:
  explicit TooManyNatives(size_t count)
      : InputError("jca_frontend", std::to_string(count) + " native methods, at most " +
                                       std::to_string(kMaxNativeMethods) + " are addressable"),
        count_(count) {}
  size_t count() const { return count_; }

 private:
  size_t count_;
};

struct NativeMethod {
  uint16_t index = 0;
  uint8_t package_id = 0;
  std::string package_name;
  std::string class_name;
  std::string method_name;
  std::vector<Type> params;
  std::vector<std::string> param_names;
  Type return_type;
  bool is_static = false;

  bool operator==(const NativeMethod&) const = default;
};

struct NativeMethodTable {
  std::vector<NativeMethod> entries;

  size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  std::optional<uint16_t> IndexOf(const std::string& package_name, const std::string& class_name,
                                  const std::string& method_name,
                                  const std::vector<Type>& params) const;

  bool operator==(const NativeMethodTable&) const = default;
};

// Indexes every native method from 0, in package order, then class order,
// then declaration order. `package_ids` defaults to list position.
NativeMethodTable CollectNativeMethods(const std::vector<const JcaPackage*>& packages,
                                       const std::vector<uint8_t>& package_ids = {});

}  // namespace jcimage::jca
