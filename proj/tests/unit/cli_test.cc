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

#include <gtest/gtest.h>
#include <openssl/sha.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "../support/fixtures.h"
#include "jcimage/cli/commands.h"
#include "jcimage/flash/filesystem.h"
#include "jcimage/util/file_io.h"
#include "json.hpp"

namespace jcimage {
namespace {

namespace fs = std::filesystem;
using testing::FixturePath;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() /
            ("jcimage_cli_" + std::to_string(::getpid()) + "_" + info->name());
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  cli::BuildPaths Paths(const std::string& out = "out") const {
    cli::BuildPaths p;
    p.config = FixturePath("corpus/config.json");
    p.jca_dir = FixturePath("corpus/jca");
    p.out_dir = root_ / out;
    return p;
  }

  fs::path WriteConfig(const nlohmann::json& j) const {
    fs::path p = root_ / "config.json";
    WriteFileText(p, j.dump());
    return p;
  }

  static nlohmann::json CorpusConfig() {
    return nlohmann::json::parse(testing::ReadFixture("corpus/config.json"));
  }

  fs::path root_;
};

std::string OpenSslSha256(const std::string& data) {
  unsigned char md[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), md);
  std::string out;
  char buf[3];
  for (unsigned char c : md) {
    std::snprintf(buf, sizeof buf, "%02x", c);
    out += buf;
  }
  return out;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST_F(CliTest, BuildWritesEveryOutput) {
  cli::BuildReport r = cli::RunBuild(Paths());
  fs::path out = root_ / "out";
  for (const char* f : {"flash.hex", "flash.bin", "jni.h", "report.json", "cap/manifest.jsonl",
                        "cap/demo.util/util.cap", "cap/demo.wallet/javacard/Applet.cap"}) {
    EXPECT_TRUE(fs::is_regular_file(out / f)) << f;
  }
  EXPECT_EQ(r.native_method_count, 2u);
  ASSERT_EQ(r.packages.size(), 3u);
  EXPECT_EQ(r.packages[1].name, "demo.crypto");
  EXPECT_EQ(r.packages[1].native_methods, 2u);
  EXPECT_FALSE(r.packages[1].bcv_expected);
  EXPECT_TRUE(r.warnings.empty());
}

TEST_F(CliTest, ReportDigestsMatchFiles) {
  cli::BuildReport r = cli::RunBuild(Paths());
  ASSERT_FALSE(r.output_digests.empty());
  for (const auto& [rel, digest] : r.output_digests) {
    EXPECT_EQ(digest, OpenSslSha256(Slurp(root_ / "out" / rel))) << rel;
  }
  auto j = nlohmann::json::parse(Slurp(root_ / "out/report.json"));
  EXPECT_EQ(j["outputs"].size(), r.output_digests.size());
}

TEST_F(CliTest, ReportTotalsAreSumsOfParts) {
  cli::BuildReport r = cli::RunBuild(Paths());
  uint64_t total = r.package_table_bytes;
  for (const auto& p : r.packages) {
    uint64_t cap = 0;
    for (const auto& [name, size] : p.component_sizes) cap += 3u + size;
    EXPECT_EQ(cap, p.cap_bytes);
    total += p.image_bytes;
  }
  EXPECT_EQ(total, r.image_payload_bytes);
  // 8-byte bitmap under a 1-byte tag and 3-byte header.
  EXPECT_EQ(r.package_table_bytes, 12u);
  // The bytes written into flash are exactly the payload.
  Bytes bin = ReadFileBytes(root_ / "out/flash.bin");
  uint64_t programmed = 0;
  for (uint8_t b : bin) programmed += b != 0xFF ? 1 : 0;
  EXPECT_LE(programmed, r.image_payload_bytes);
  EXPECT_GT(programmed, r.image_payload_bytes * 3 / 4);
}

TEST_F(CliTest, RebuildIsByteIdentical) {
  cli::BuildReport a = cli::RunBuild(Paths("a"));
  cli::BuildReport b = cli::RunBuild(Paths("b"));
  EXPECT_EQ(a.output_digests, b.output_digests);
  EXPECT_EQ(Slurp(root_ / "a/report.json"), Slurp(root_ / "b/report.json"));
}

TEST_F(CliTest, HexAndBinAgree) {
  cli::RunBuild(Paths());
  auto config = image::LoadMemoryConfig(FixturePath("corpus/config.json"));
  auto from_hex = cli::LoadDeviceImage(root_ / "out/flash.hex", config);
  auto from_bin = cli::LoadDeviceImage(root_ / "out/flash.bin", config);
  EXPECT_TRUE(std::equal(from_hex.cells().begin(), from_hex.cells().end(),
                         from_bin.cells().begin(), from_bin.cells().end()));
  std::string hex = Slurp(root_ / "out/flash.hex");
  EXPECT_EQ(hex.substr(0, 15), ":020000040801F1");  // target sector at 0x08010000
  EXPECT_EQ(hex.substr(hex.size() - 12), ":00000001FF\n");
}

TEST_F(CliTest, ManifestAndHeader) {
  cli::RunBuild(Paths());
  std::istringstream manifest(Slurp(root_ / "out/cap/manifest.jsonl"));
  std::vector<std::string> names;
  for (std::string line; std::getline(manifest, line);) {
    names.push_back(nlohmann::json::parse(line)["package"]);
  }
  EXPECT_EQ(names, (std::vector<std::string>{"demo.util", "demo.crypto", "demo.wallet"}));
  std::string header = Slurp(root_ / "out/jni.h");
  EXPECT_NE(header.find("#define STARTING_JAVACARD_PACKAGE 0x02"), std::string::npos);
  EXPECT_NE(header.find("#define NATIVE_METHOD_COUNT 2"), std::string::npos);
}

TEST_F(CliTest, MissingPackageNamesIt) {
  auto j = CorpusConfig();
  j["packages"].push_back("demo.absent");
  cli::BuildPaths p = Paths();
  p.config = WriteConfig(j);
  try {
    cli::RunBuild(p);
    FAIL() << "no error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("demo.absent"), std::string::npos);
  }
  EXPECT_FALSE(fs::exists(root_ / "out/report.json"));
}

TEST_F(CliTest, PackageNameMustMatchFile) {
  fs::path dir = root_ / "jca";
  fs::create_directories(dir);
  for (const char* f : {"util", "crypto", "wallet"}) {
    fs::copy_file(FixturePath(std::string("corpus/jca/") + f + ".jca"), dir / (std::string(f) + ".jca"));
  }
  fs::rename(dir / "util.jca", dir / "demo.crypto.jca");
  cli::BuildPaths p = Paths();
  p.jca_dir = dir;
  EXPECT_THROW(cli::RunBuild(p), InputError);
}

TEST_F(CliTest, ParseErrorCarriesFileLocation) {
  fs::path dir = root_ / "jca";
  fs::create_directories(dir);
  WriteFileText(dir / "util.jca", "package demo.util {\n  bogus\n}\n");
  auto j = CorpusConfig();
  j["packages"] = {"demo.util"};
  j.erase("entry_point");
  cli::BuildPaths p = Paths();
  p.config = WriteConfig(j);
  p.jca_dir = dir;
  try {
    cli::RunBuild(p);
    FAIL() << "no error";
  } catch (const InputError& e) {
    EXPECT_EQ(std::string(e.what()).rfind((dir / "util.jca").string() + ":", 0), 0u) << e.what();
  }
}

TEST_F(CliTest, NativesOutsideNativeOnlyPackageWarn) {
  auto j = CorpusConfig();
  j["packages"][1] = "demo.crypto";
  cli::BuildPaths p = Paths();
  p.config = WriteConfig(j);
  cli::BuildReport r = cli::RunBuild(p);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("demo.crypto"), std::string::npos);
}

TEST_F(CliTest, MissingEntryPointWarns) {
  auto j = CorpusConfig();
  j.erase("entry_point");
  cli::BuildPaths p = Paths();
  p.config = WriteConfig(j);
  cli::BuildReport r = cli::RunBuild(p);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(Slurp(root_ / "out/jni.h").find("#define STARTING_JAVACARD_PACKAGE 0x00"),
            std::string::npos);
}

TEST_F(CliTest, UnknownConfigKeyRejected) {
  auto j = CorpusConfig();
  j["sector"] = 4;
  cli::BuildPaths p = Paths();
  p.config = WriteConfig(j);
  EXPECT_THROW(cli::RunBuild(p), InputError);
}

class FsCommandTest : public CliTest {
 protected:
  void SetUp() override {
    CliTest::SetUp();
    cli::RunBuild(Paths());
    config_ = image::LoadMemoryConfig(FixturePath("corpus/config.json"));
  }
  flash::FlashDevice Device() const {
    return cli::LoadDeviceImage(root_ / "out/flash.hex", config_);
  }
  image::MemoryConfig config_;
};

TEST_F(FsCommandTest, VerifyFreshImage) {
  std::ostringstream out;
  EXPECT_EQ(cli::FsVerify(Device(), out), cli::kExitOk);
  EXPECT_NE(out.str().find("live 8\n"), std::string::npos) << out.str();
  EXPECT_NE(out.str().find("crc_bad 0\n"), std::string::npos);
  EXPECT_NE(out.str().find("garbage_bytes 0\n"), std::string::npos);
  EXPECT_NE(out.str().find("garbage_ratio 0.0000\n"), std::string::npos);
}

TEST_F(FsCommandTest, GetPackageTable) {
  std::ostringstream out;
  EXPECT_EQ(cli::FsGet(Device(), "00", out), cli::kExitOk);
  // Packages 0, 1, 2 present: bits 0..2 of the first byte, padded to 8 bytes.
  EXPECT_EQ(out.str(), "0700000000000000\n");
}

TEST_F(FsCommandTest, GetAbsentTag) {
  std::ostringstream out;
  EXPECT_EQ(cli::FsGet(Device(), "0107", out), cli::kExitNotFound);
  EXPECT_TRUE(out.str().empty());
}

TEST_F(FsCommandTest, DumpListsBlocksInOrder) {
  std::ostringstream out;
  EXPECT_EQ(cli::FsDump(Device(), out), cli::kExitOk);
  std::istringstream lines(out.str());
  std::vector<std::string> all;
  for (std::string l; std::getline(lines, l);) all.push_back(l);
  ASSERT_EQ(all.size(), 8u);
  EXPECT_EQ(all[0], "sector 4 0x010000 live tag=00 len=8 crc=ok");
  EXPECT_NE(all[1].find("tag=0100 "), std::string::npos);
}

TEST_F(FsCommandTest, VerifyCountsSupersededAsGarbage) {
  flash::FlashDevice device = Device();
  {
    auto fs = flash::FileSystem::Mount(device);
    fs.Write(Bytes{0x00}, Bytes(8, 0x01));
  }
  std::ostringstream out;
  EXPECT_EQ(cli::FsVerify(device, out), cli::kExitOk);
  EXPECT_NE(out.str().find("superseded 1\n"), std::string::npos) << out.str();
  EXPECT_NE(out.str().find("garbage_bytes 12\n"), std::string::npos) << out.str();
}

TEST_F(FsCommandTest, VerifyFlagsFlippedBit) {
  flash::FlashDevice device = Device();
  Bytes cells(device.cells().begin(), device.cells().end());
  cells[0x010000 + 20] ^= 0x01;  // inside the first CAP block's data
  device.LoadCells(cells);
  std::ostringstream out;
  EXPECT_EQ(cli::FsVerify(device, out), cli::kExitInput);
  EXPECT_NE(out.str().find("crc_bad 1\n"), std::string::npos) << out.str();
  EXPECT_NE(out.str().find("FAIL\n"), std::string::npos);
}

// The executable's exit codes.
int RunCli(const std::string& args) {
  std::string cmd = std::string(JCIMAGE_CLI) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(CliTest, ExitCodes) {
  std::string jca = FixturePath("corpus/jca");
  std::string out = (root_ / "out").string();
  EXPECT_EQ(RunCli("build --config " + FixturePath("corpus/config.json") + " --jca-dir " + jca +
                " --out " + out),
            0);
  EXPECT_EQ(RunCli("fs --image " + out + "/flash.hex verify"), 0);
  EXPECT_EQ(RunCli("fs --image " + out + "/flash.bin get 00"), 0);
  EXPECT_EQ(RunCli("fs --image " + out + "/flash.bin get 0203"), 3);
  EXPECT_EQ(RunCli("fs --image " + out + "/flash.hex get 0203 --base-address 08000000"), 3);
  EXPECT_EQ(RunCli("fs --image " + out + "/flash.hex dump --base-address nothex"), 2);

  auto j = CorpusConfig();
  j["packages"].push_back("demo.absent");
  EXPECT_EQ(RunCli("build --config " + WriteConfig(j).string() + " --jca-dir " + jca + " --out " +
                out + "2"),
            2);
  EXPECT_EQ(RunCli("build --config"), 2);
  EXPECT_EQ(RunCli("fs --image /nonexistent/flash.bin verify"), 2);
}

}  // namespace
}  // namespace jcimage
