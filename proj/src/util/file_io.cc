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

#include "jcimage/util/file_io.h"

#include <fstream>
#include <iterator>
#include <system_error>

#include "jcimage/error.h"

namespace jcimage {

namespace fs = std::filesystem;

namespace {

std::string ReadRaw(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError(path.string(), "read failed");
  return data;
}

void WriteRaw(const fs::path& path, const char* data, size_t size) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(path.parent_path().string(), ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out.write(data, static_cast<std::streamsize>(size));
  if (!out) throw IoError(path.string(), "write failed");
}

}  // namespace

Bytes ReadFileBytes(const fs::path& path) {
  std::string raw = ReadRaw(path);
  return Bytes(raw.begin(), raw.end());
}

std::string ReadFileText(const fs::path& path) { return ReadRaw(path); }

void WriteFileBytes(const fs::path& path, ByteView data) {
  WriteRaw(path, reinterpret_cast<const char*>(data.data()), data.size());
}

void WriteFileText(const fs::path& path, std::string_view text) {
  WriteRaw(path, text.data(), text.size());
}

}  // namespace jcimage
