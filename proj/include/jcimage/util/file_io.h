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
#include <string_view>

#include "jcimage/util/bytes.h"

namespace jcimage {

// Whole-file helpers. Failures raise IoError carrying the path.
Bytes ReadFileBytes(const std::filesystem::path& path);
std::string ReadFileText(const std::filesystem::path& path);

// Creates parent directories as needed.
void WriteFileBytes(const std::filesystem::path& path, ByteView data);
void WriteFileText(const std::filesystem::path& path, std::string_view text);

}  // namespace jcimage
