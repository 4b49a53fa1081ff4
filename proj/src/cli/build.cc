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

#include <algorithm>
#include <fstream>

#include "jcimage/cap/artifact.h"
#include "jcimage/cap/builder.h"
#include "jcimage/cli/commands.h"
#include "jcimage/flash/block.h"
#include "jcimage/hex/intel_hex.h"
#include "jcimage/image/serializer.h"
#include "jcimage/jca/natives.h"
#include "jcimage/jca/parser.h"
#include "jcimage/jni/dispatcher.h"
#include "jcimage/util/digest.h"
#include "jcimage/util/file_io.h"

namespace jcimage::cli {

namespace fs = std::filesystem;

nlohmann::ordered_json BuildReport::ToJson() const {
  nlohmann::ordered_json j;
  j["packages"] = nlohmann::ordered_json::array();
  for (const PackageReport& p : packages) {
    nlohmann::ordered_json pj;
    pj["name"] = p.name;
    pj["id"] = p.id;
    pj["aid"] = p.aid;
    pj["components"] = p.component_sizes;
    pj["cap_bytes"] = p.cap_bytes;
    pj["image_bytes"] = p.image_bytes;
    pj["native_methods"] = p.native_methods;
    pj["bcv_expected"] = p.bcv_expected;
    j["packages"].push_back(std::move(pj));
  }
  j["package_table_bytes"] = package_table_bytes;
  j["image_payload_bytes"] = image_payload_bytes;
  j["image_blocks"] = image_blocks;
  j["native_method_count"] = native_method_count;
  j["outputs"] = output_digests;
  j["warnings"] = warnings;
  return j;
}

namespace {

// <jca_dir>/demo.util.jca, then demo/util.jca, then util.jca.
fs::path FindPackageFile(const fs::path& jca_dir, const std::string& name) {
  std::string nested = name;
  std::replace(nested.begin(), nested.end(), '.', '/');
  const fs::path candidates[] = {jca_dir / (name + ".jca"), jca_dir / (nested + ".jca"),
                                 jca_dir / (name.substr(name.rfind('.') + 1) + ".jca")};
  for (const fs::path& p : candidates) {
    if (fs::is_regular_file(p)) return p;
  }
  throw InputError("cli", "package " + name + ": no " + candidates[0].filename().string() +
                              " (or " + candidates[2].filename().string() + ") in " +
                              jca_dir.string());
}

jca::JcaPackage LoadPackage(const fs::path& jca_dir, const std::string& name) {
  fs::path path = FindPackageFile(jca_dir, name);
  std::string text = ReadFileText(path);
  jca::JcaPackage pkg;
  try {
    pkg = jca::ParseJca(text);
  } catch (const InputError& e) {
    throw InputError(e.module(), path.string() + ":" + e.what());
  }
  if (pkg.name != name) {
    throw InputError("cli", path.string() + ": declares package " + pkg.name + ", config says " +
                                name);
  }
  return pkg;
}

size_t NativeCount(const jca::JcaPackage& pkg) {
  size_t n = 0;
  for (const auto& c : pkg.classes) {
    for (const auto& m : c.methods) n += m.is_native ? 1 : 0;
  }
  return n;
}

}  // namespace

BuildReport RunBuild(const BuildPaths& paths) {
  image::MemoryConfig config = image::LoadMemoryConfig(paths.config);
  if (paths.base_address) config.base_address = *paths.base_address;
  if (config.packages.empty()) throw InputError("config", "no packages listed");

  BuildReport report;
  std::vector<jca::JcaPackage> packages;
  packages.reserve(config.packages.size());
  for (const auto& pc : config.packages) packages.push_back(LoadPackage(paths.jca_dir, pc.name));

  std::vector<const jca::JcaPackage*> ptrs;
  std::vector<uint8_t> ids;
  cap::BuildOptions options;
  for (size_t i = 0; i < packages.size(); ++i) {
    ptrs.push_back(&packages[i]);
    ids.push_back(static_cast<uint8_t>(i));
    if (!options.corpus.emplace(packages[i].aid, &packages[i]).second) {
      throw InputError("config", "packages " + packages[i].name + " share an AID");
    }
  }
  jca::NativeMethodTable natives = jca::CollectNativeMethods(ptrs, ids);

  std::vector<cap::CapFile> caps;
  caps.reserve(packages.size());
  for (const auto& pkg : packages) caps.push_back(cap::BuildCap(pkg, natives, options));

  for (size_t i = 0; i < packages.size(); ++i) {
    size_t n = NativeCount(packages[i]);
    if (n && !config.packages[i].native_only) {
      report.warnings.push_back("package " + packages[i].name + " has " + std::to_string(n) +
                                " native method(s) but is not marked native_only; it will not "
                                "pass bytecode verification");
    }
  }

  jni::EntryPoint entry;
  if (config.entry_point.package_name.empty()) {
    report.warnings.push_back("no entry_point configured, STARTING_JAVACARD_* set to 0");
  } else {
    entry = jni::ResolveEntryPoint(ptrs, ids, config.entry_point);
  }
  jni::GeneratorOptions gen;
  gen.pop_receiver = config.pop_receiver;
  std::string header = jni::GenerateHeader(natives, entry, gen);

  std::vector<image::ImagePackage> image_packages;
  for (size_t i = 0; i < packages.size(); ++i) {
    image_packages.push_back({ids[i], &packages[i], &caps[i]});
  }
  image::InitialImage image = image::BuildInitialImage(image_packages, config);
  std::string hex_text = hex::EncodeHex(image.device.cells(), config.base_address);

  // Outputs.
  std::map<std::string, Bytes> files;
  auto text_bytes = [](const std::string& s) { return Bytes(s.begin(), s.end()); };
  files["flash.hex"] = text_bytes(hex_text);
  files["flash.bin"] = Bytes(image.device.cells().begin(), image.device.cells().end());
  files["jni.h"] = text_bytes(header);
  std::string manifest;
  for (size_t i = 0; i < caps.size(); ++i) {
    const cap::CapFile& cap = caps[i];
    std::string dir = "cap/" + cap.package_name + "/";
    for (const cap::ComponentBinary* c : cap.InLoadOrder()) {
      files[dir + "javacard/" + cap::ComponentName(c->kind) + ".cap"] = c->Encode();
    }
    std::string last = cap.package_name.substr(cap.package_name.rfind('.') + 1);
    files[dir + last + ".cap"] = cap::BuildCapArchive(cap);
    manifest += cap::ManifestEntry(cap).dump() + "\n";

    PackageReport pr;
    pr.name = cap.package_name;
    pr.id = ids[i];
    pr.aid = ToHex(cap.package_aid);
    for (const cap::ComponentBinary* c : cap.InLoadOrder()) {
      pr.component_sizes[cap::ComponentName(c->kind)] = c->size();
      pr.cap_bytes += 3u + c->size();
    }
    pr.native_methods = NativeCount(packages[i]);
    pr.bcv_expected = !cap.uses_impdep;
    report.packages.push_back(std::move(pr));
  }
  files["cap/manifest.jsonl"] = text_bytes(manifest);

  for (const auto& [rel, data] : files) {
    WriteFileBytes(paths.out_dir / rel, data);
    report.output_digests[rel] = Sha256Hex(data);
  }
  for (const image::TaggedData& b : image.blocks) {
    uint64_t size = flash::EncodedBlockSize(b.tag.size(), b.data.size());
    if (b.tag[0] == image::tag_kind::kPackageList) {
      report.package_table_bytes += size;
    } else {
      report.packages.at(b.tag[1]).image_bytes += size;
    }
  }
  report.image_payload_bytes = image.payload_bytes;
  report.image_blocks = image.blocks.size();
  report.native_method_count = natives.size();

  WriteFileText(paths.out_dir / "report.json", report.ToJson().dump(2) + "\n");
  return report;
}

}  // namespace jcimage::cli
