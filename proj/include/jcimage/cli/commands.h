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
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "jcimage/flash/device.h"
#include "jcimage/image/memory_config.h"

namespace jcimage::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitInput = 2,
  kExitNotFound = 3,
};

struct PackageReport {
  std::string name;
  uint8_t id = 0;
  std::string aid;
  std::map<std::string, uint16_t> component_sizes;
  uint64_t cap_bytes = 0;    // sum of component sizes with their 3-byte headers
  uint64_t image_bytes = 0;  // encoded CAP and static field blocks in flash
  size_t native_methods = 0;
  bool bcv_expected = true;
};

struct BuildReport {
  std::vector<PackageReport> packages;
  uint64_t package_table_bytes = 0;
  uint64_t image_payload_bytes = 0;  // package table plus every package's image_bytes
  size_t image_blocks = 0;
  size_t native_method_count = 0;
  std::map<std::string, std::string> output_digests;  // relative path -> sha256
  std::vector<std::string> warnings;

  nlohmann::ordered_json ToJson() const;
};

struct BuildPaths {
  std::filesystem::path config;
  std::filesystem::path jca_dir;
  std::filesystem::path out_dir;
  std::optional<uint32_t> base_address;  // overrides the config
};

// Runs the whole pipeline and writes, under out_dir: flash.hex, flash.bin,
// jni.h, cap/<package>/..., cap/manifest.jsonl and report.json.
BuildReport RunBuild(const BuildPaths& paths);

// Loads a device image: Intel HEX when the name ends in .hex (placed at
// `base_address`), raw cells otherwise.
flash::FlashDevice LoadDeviceImage(const std::filesystem::path& path,
                                   const image::MemoryConfig& config,
                                   std::optional<uint32_t> base_address = std::nullopt);

// Filesystem inspection. Each writes to `out` and returns an exit code.
int FsDump(const flash::FlashDevice& device, std::ostream& out);
int FsGet(const flash::FlashDevice& device, const std::string& tag_hex, std::ostream& out);
int FsVerify(const flash::FlashDevice& device, std::ostream& out);

}  // namespace jcimage::cli
