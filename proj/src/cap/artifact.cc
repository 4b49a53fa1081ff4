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

#include "jcimage/cap/artifact.h"

#include <algorithm>

#include <zlib.h>

#include "jcimage/util/file_io.h"

namespace jcimage::cap {

namespace {

// 1980-01-01 00:00, the earliest DOS timestamp.
constexpr uint16_t kDosDate = 0x21;
constexpr uint16_t kDosTime = 0;

// Zip fields are little-endian, unlike everything else here.
class LeWriter {
 public:
  void U2(uint32_t v) {
    out_.push_back(static_cast<uint8_t>(v));
    out_.push_back(static_cast<uint8_t>(v >> 8));
  }
  void U4(uint32_t v) {
    U2(v & 0xFFFF);
    U2(v >> 16);
  }
  void Append(ByteView b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void Append(const std::string& s) { out_.insert(out_.end(), s.begin(), s.end()); }
  size_t size() const { return out_.size(); }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

std::string PackagePath(const std::string& name) {
  std::string path = name;
  std::replace(path.begin(), path.end(), '.', '/');
  return path;
}

std::string LastSegment(const std::string& name) {
  auto dot = name.rfind('.');
  return dot == std::string::npos ? name : name.substr(dot + 1);
}

}  // namespace

std::string ArchiveEntryName(const CapFile& cap, ComponentKind kind) {
  return PackagePath(cap.package_name) + "/javacard/" + ComponentName(kind) + ".cap";
}

Bytes BuildCapArchive(const CapFile& cap) {
  struct Entry {
    std::string name;
    uint32_t crc;
    uint32_t size;
    uint32_t offset;
  };
  LeWriter w;
  std::vector<Entry> entries;
  for (const ComponentBinary* c : cap.InLoadOrder()) {
    Bytes data = c->Encode();
    Entry e{ArchiveEntryName(cap, c->kind),
            static_cast<uint32_t>(crc32(0L, data.data(), static_cast<uInt>(data.size()))),
            static_cast<uint32_t>(data.size()), static_cast<uint32_t>(w.size())};
    w.U4(0x04034b50);
    w.U2(10);  // version needed
    w.U2(0);   // flags
    w.U2(0);   // stored
    w.U2(kDosTime);
    w.U2(kDosDate);
    w.U4(e.crc);
    w.U4(e.size);
    w.U4(e.size);
    w.U2(static_cast<uint32_t>(e.name.size()));
    w.U2(0);
    w.Append(e.name);
    w.Append(data);
    entries.push_back(std::move(e));
  }
  const uint32_t directory_offset = static_cast<uint32_t>(w.size());
  for (const Entry& e : entries) {
    w.U4(0x02014b50);
    w.U2(20);  // made by
    w.U2(10);
    w.U2(0);
    w.U2(0);
    w.U2(kDosTime);
    w.U2(kDosDate);
    w.U4(e.crc);
    w.U4(e.size);
    w.U4(e.size);
    w.U2(static_cast<uint32_t>(e.name.size()));
    w.U2(0);  // extra
    w.U2(0);  // comment
    w.U2(0);  // disk
    w.U2(0);  // internal attributes
    w.U4(0);  // external attributes
    w.U4(e.offset);
    w.Append(e.name);
  }
  const uint32_t directory_size = static_cast<uint32_t>(w.size()) - directory_offset;
  w.U4(0x06054b50);
  w.U2(0);
  w.U2(0);
  w.U2(static_cast<uint32_t>(entries.size()));
  w.U2(static_cast<uint32_t>(entries.size()));
  w.U4(directory_size);
  w.U4(directory_offset);
  w.U2(0);
  return w.take();
}

CapArtifact ExportCapArtifact(const CapFile& cap, const std::filesystem::path& out_dir) {
  CapArtifact artifact;
  for (const ComponentBinary* c : cap.InLoadOrder()) {
    auto path = out_dir / "javacard" / (std::string(ComponentName(c->kind)) + ".cap");
    WriteFileBytes(path, c->Encode());
    artifact.component_files.push_back(path);
  }
  artifact.archive = out_dir / (LastSegment(cap.package_name) + ".cap");
  WriteFileBytes(artifact.archive, BuildCapArchive(cap));
  return artifact;
}

nlohmann::ordered_json ManifestEntry(const CapFile& cap) {
  nlohmann::ordered_json sizes = nlohmann::ordered_json::object();
  for (const ComponentBinary* c : cap.InLoadOrder()) sizes[ComponentName(c->kind)] = c->size();
  nlohmann::ordered_json entry;
  entry["package"] = cap.package_name;
  entry["aid"] = ToHex(cap.package_aid);
  entry["version"] = std::to_string(cap.package_version.major) + "." +
                     std::to_string(cap.package_version.minor);
  entry["components"] = std::move(sizes);
  entry["bcv_expected"] = !cap.uses_impdep;
  return entry;
}

}  // namespace jcimage::cap
