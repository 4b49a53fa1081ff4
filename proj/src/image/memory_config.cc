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

#include "jcimage/image/memory_config.h"

#include <algorithm>
#include <iterator>

#include "json.hpp"

#include "jcimage/error.h"
#include "jcimage/flash/device.h"
#include "jcimage/util/file_io.h"

namespace jcimage::image {

using nlohmann::json;

namespace {

[[noreturn]] void Bad(const std::string& why) { throw InputError("config", why); }

uint32_t ParseAddress(const json& v) {
  if (v.is_number_unsigned()) return v.get<uint32_t>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    try {
      size_t used = 0;
      unsigned long value = std::stoul(s, &used, 0);
      if (used == s.size() && value <= 0xFFFFFFFFul) return static_cast<uint32_t>(value);
    } catch (const std::exception&) {
    }
  }
  Bad("base_address must be a number or a \"0x...\" string");
}

}  // namespace

MemoryConfig MemoryConfig::Default() {
  MemoryConfig c;
  c.sector_sizes = flash::FlashDevice::Stm32f401reGeometry();
  c.target_sector = 4;
  c.reserved_sector = c.sector_sizes.size() - 1;
  return c;
}

void MemoryConfig::Validate() const {
  if (sector_sizes.size() < 2) Bad("at least two sectors are needed");
  for (uint32_t s : sector_sizes) {
    if (s == 0 || (s & (s - 1)) != 0) Bad("sector size " + std::to_string(s) + " is not a power of two");
  }
  if (target_sector >= sector_sizes.size()) Bad("target_sector out of range");
  if (reserved_sector >= sector_sizes.size()) Bad("reserved_sector out of range");
  if (reserved_sector == target_sector) Bad("target_sector cannot be the reserved sector");
  if (packages.size() > 256) Bad("at most 256 packages");
  if (bitmap_min == 0) Bad("bitmap_min must be positive");
  for (size_t i = 0; i < packages.size(); ++i) {
    if (packages[i].name.empty()) Bad("package " + std::to_string(i) + " has no name");
    for (size_t k = 0; k < i; ++k) {
      if (packages[k].name == packages[i].name) Bad("package " + packages[i].name + " listed twice");
    }
  }
}

MemoryConfig ParseMemoryConfig(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    Bad(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) Bad("top level must be an object");
  static const char* const kKeys[] = {"sectors",      "target_sector", "reserved_sector",
                                      "bitmap_min",   "base_address",  "pop_receiver",
                                      "packages",     "entry_point"};
  for (const auto& item : j.items()) {
    if (std::find(std::begin(kKeys), std::end(kKeys), item.key()) == std::end(kKeys)) {
      Bad("unknown key \"" + item.key() + "\"");
    }
  }
  MemoryConfig c = MemoryConfig::Default();
  try {
    if (j.contains("sectors")) {
      c.sector_sizes.clear();
      for (const auto& kib : j.at("sectors")) c.sector_sizes.push_back(kib.get<uint32_t>() * 1024u);
      c.reserved_sector = c.sector_sizes.empty() ? 0 : c.sector_sizes.size() - 1;
    }
    if (j.contains("target_sector")) c.target_sector = j.at("target_sector").get<size_t>();
    if (j.contains("reserved_sector")) c.reserved_sector = j.at("reserved_sector").get<size_t>();
    if (j.contains("bitmap_min")) c.bitmap_min = j.at("bitmap_min").get<size_t>();
    if (j.contains("base_address")) c.base_address = ParseAddress(j.at("base_address"));
    if (j.contains("pop_receiver")) c.pop_receiver = j.at("pop_receiver").get<bool>();
    for (const auto& p : j.value("packages", json::array())) {
      PackageConfig pc;
      if (p.is_string()) {
        pc.name = p.get<std::string>();
      } else {
        pc.name = p.at("name").get<std::string>();
        pc.native_only = p.value("native_only", false);
      }
      c.packages.push_back(std::move(pc));
    }
    if (j.contains("entry_point")) {
      const json& e = j.at("entry_point");
      c.entry_point.package_name = e.at("package").get<std::string>();
      c.entry_point.class_name = e.at("class").get<std::string>();
      c.entry_point.method_name = e.at("method").get<std::string>();
    }
  } catch (const json::exception& e) {
    Bad(std::string("bad value: ") + e.what());
  }
  c.Validate();
  return c;
}

MemoryConfig LoadMemoryConfig(const std::filesystem::path& path) {
  std::string text = ReadFileText(path);
  try {
    return ParseMemoryConfig(text);
  } catch (const InputError& e) {
    throw InputError("config", path.string() + ": " + e.what());
  }
}

}  // namespace jcimage::image
