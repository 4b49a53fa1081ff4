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

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "jcimage/cap/cap_file.h"

namespace jcimage::cap {

// Files written for one package.
struct CapArtifact {
  std::vector<std::filesystem::path> component_files;
  std::filesystem::path archive;
};

// Path of a component inside the archive, e.g. "demo/util/javacard/Header.cap".
std::string ArchiveEntryName(const CapFile& cap, ComponentKind kind);

// Stored (uncompressed) zip holding every present component. Timestamps are
// fixed so identical inputs give identical archives.
Bytes BuildCapArchive(const CapFile& cap);

// Writes <out_dir>/javacard/<Component>.cap for each component and
// <out_dir>/<last package name segment>.cap as the archive.
CapArtifact ExportCapArtifact(const CapFile& cap, const std::filesystem::path& out_dir);

// One manifest record: package, aid, component sizes, bcv_expected.
// Packages containing impdep opcodes are not expected to pass the verifier.
nlohmann::ordered_json ManifestEntry(const CapFile& cap);

}  // namespace jcimage::cap
