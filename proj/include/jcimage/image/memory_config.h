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
#include <filesystem>
#include <string>
#include <vector>

#include "jcimage/jni/dispatcher.h"

namespace jcimage::image {

struct PackageConfig {
  std::string name;       // dotted package name, file is <jca_dir>/<name>.jca
  bool native_only = false;
};

// Build configuration. Package ids are positions in `packages`.
struct MemoryConfig {
  std::vector<uint32_t> sector_sizes;  // bytes
  size_t target_sector = 4;  // 0-based; the fifth sector, 64 KiB on the STM32F401RE
  size_t reserved_sector = 7;
  std::vector<PackageConfig> packages;
  jni::EntryPointNames entry_point;
  size_t bitmap_min = 8;
  uint32_t base_address = 0x08000000;
  bool pop_receiver = false;

  // STM32F401RE geometry, the 64 KiB fifth sector as target, last sector
  // reserved.
  static MemoryConfig Default();

  // Throws InputError on an inconsistent configuration.
  void Validate() const;
};

// JSON keys: sectors (KiB list), target_sector, reserved_sector, packages
// (names or {name, native_only}), entry_point {package, class, method},
// bitmap_min, base_address ("0x..." or number), pop_receiver. Missing keys
// take the defaults.
MemoryConfig ParseMemoryConfig(const std::string& json_text);
MemoryConfig LoadMemoryConfig(const std::filesystem::path& path);

}  // namespace jcimage::image
