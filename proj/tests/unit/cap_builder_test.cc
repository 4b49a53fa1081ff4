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

#include <algorithm>
#include <filesystem>
#include <numeric>

#include "jcimage/cap/artifact.h"
#include "jcimage/cap/assembler.h"
#include "jcimage/cap/builder.h"
#include "jcimage/jca/parser.h"
#include "jcimage/util/file_io.h"
#include "../support/cap_reader.h"
#include "../support/corpus.h"
#include "../support/fixtures.h"

namespace jcimage::cap {
namespace {

using jca::Instruction;
using jca::Operand;
using jca::Type;
using testing::Corpus;

Instruction Ins(std::string mnemonic, std::vector<Operand> ops = {}) {
  Instruction i;
  i.mnemonic = std::move(mnemonic);
  i.operands = std::move(ops);
  return i;
}

jca::JcaMethod NativeReturning(Type ret) {
  jca::JcaMethod m;
  m.is_native = true;
  m.name = "n";
  m.return_type = ret;
  return m;
}

CapFile BuildFixture(const std::string& relative) {
  jca::JcaPackage pkg = jca::ParseJca(testing::ReadFixture(relative));
  auto natives = jca::CollectNativeMethods({&pkg});
  return BuildCap(pkg, natives);
}

// Every CAP the tests know about.
std::vector<CapFile> AllCaps() {
  Corpus corpus;
  auto caps = corpus.BuildAll();
  caps.push_back(BuildFixture("jca/sample.jca"));
  caps.push_back(BuildFixture("jca/nativedemo.jca"));
  return caps;
}

TEST(Assembler, ImpdepOpcodes) {
  EXPECT_EQ(AssembleMethod({Ins("impdep1")}).bytes, (Bytes{0xFE}));
  EXPECT_EQ(AssembleMethod({Ins("impdep2")}).bytes, (Bytes{0xFF}));
}

TEST(Assembler, EmptyBody) {
  AssembledCode code = AssembleMethod({});
  EXPECT_TRUE(code.bytes.empty());
  EXPECT_TRUE(code.relocations.empty());
}

TEST(Assembler, BranchOffsetsAreRelative) {
  Instruction target = Ins("return");
  target.labels = {"L0"};
  Instruction loop = Ins("goto", {Operand::Label("L0")});
  // sconst_0 ; L0: return ; goto L0
  AssembledCode code = AssembleMethod({Ins("sconst_0"), target, loop});
  ASSERT_EQ(code.bytes.size(), 4u);
  EXPECT_EQ(code.bytes[3], 0xFF);  // -1
  EXPECT_EQ(code.labels.at("L0"), 1u);
}

TEST(Assembler, UnresolvedLabelThrows) {
  EXPECT_THROW(AssembleMethod({Ins("goto", {Operand::Label("nowhere")})}), UnresolvedLabel);
}

TEST(Assembler, OperandOverflowThrows) {
  EXPECT_THROW(AssembleMethod({Ins("bspush", {Operand::Immediate(300)})}), OperandOverflow);
  EXPECT_THROW(AssembleMethod({Ins("sspush", {Operand::Immediate(70000)})}), OperandOverflow);
}

TEST(Assembler, RecordsConstantPoolOperands) {
  AssembledCode code = AssembleMethod(
      {Ins("getfield_s_this", {Operand::Immediate(3)}), Ins("invokestatic", {Operand::Immediate(2)}),
       Ins("checkcast", {Operand::Immediate(10), Operand::Immediate(0)}),
       Ins("checkcast", {Operand::Immediate(0), Operand::Immediate(1)})});
  std::vector<Relocation> want = {{1, 1}, {3, 2}, {11, 2}};
  EXPECT_EQ(code.relocations, want);
}

TEST(NativeStub, ShortReturn) {
  auto body = InjectNativeStub(NativeReturning(Type::Primitive(Type::Kind::kShort)), 0);
  ASSERT_EQ(body.size(), 3u);
  EXPECT_EQ(body[0].mnemonic, "sspush");
  EXPECT_EQ(body[0].operands.at(0).value, 0);
  EXPECT_EQ(body[1].mnemonic, "impdep1");
  EXPECT_EQ(body[2].mnemonic, "sreturn");
}

TEST(NativeStub, ReturnOpFollowsType) {
  EXPECT_EQ(InjectNativeStub(NativeReturning(Type::Void()), 7)[2].mnemonic, "return");
  EXPECT_EQ(InjectNativeStub(NativeReturning(Type::Primitive(Type::Kind::kInt)), 1)[2].mnemonic,
            "ireturn");
  EXPECT_EQ(InjectNativeStub(NativeReturning(Type::Primitive(Type::Kind::kByte, true)), 1)[2]
                .mnemonic,
            "areturn");
  EXPECT_EQ(InjectNativeStub(NativeReturning(Type::Primitive(Type::Kind::kBoolean)), 1)[2]
                .mnemonic,
            "sreturn");
}

TEST(NativeStub, HighestIndexEncodes) {
  auto body = InjectNativeStub(NativeReturning(Type::Void()), 65535);
  EXPECT_EQ(AssembleMethod(body).bytes, (Bytes{0x11, 0xFF, 0xFF, 0xFE, 0x7A}));
}

TEST(CapBuilder, DirectoryMatchesRemeasuredSizes) {
  for (const CapFile& cap : AllCaps()) {
    SCOPED_TRACE(cap.package_name);
    auto dir = testing::ReadDirectory(cap.Get(ComponentKind::kDirectory).info);
    size_t recorded = 0, measured = 0;
    for (uint8_t tag = 1; tag <= 12; ++tag) {
      uint16_t want = 0;
      auto kind = ComponentFromTag(tag);
      if (kind && cap.Has(*kind)) want = static_cast<uint16_t>(cap.Get(*kind).info.size());
      EXPECT_EQ(dir.sizes[tag - 1], want) << "tag " << int(tag);
      recorded += dir.sizes[tag - 1];
      measured += want;
    }
    EXPECT_EQ(recorded, measured);
    EXPECT_EQ(dir.custom_count, 0);
    EXPECT_EQ(dir.sizes[11], 0) << "no Debug component";
  }
}

TEST(CapBuilder, ReferenceLocationsLandOnConstantPoolOperands) {
  for (const CapFile& cap : AllCaps()) {
    SCOPED_TRACE(cap.package_name);
    const Bytes& method = cap.Get(ComponentKind::kMethod).info;
    uint16_t cp_count = testing::ReadCpCount(cap.Get(ComponentKind::kConstantPool).info);
    auto refs = testing::ReadRefLocation(cap.Get(ComponentKind::kReferenceLocation).info);
    for (uint32_t off : refs.byte_index) {
      ASSERT_LT(off, method.size());
      EXPECT_LT(method[off], cp_count);
      EXPECT_TRUE(testing::OneByteCpOpcodes().count(method[off - 1])) << off;
    }
    for (uint32_t off : refs.byte2_index) {
      ASSERT_LT(off + 1, method.size());
      EXPECT_LT(ReadU2(method, off), cp_count);
      bool direct = testing::TwoByteCpOpcodes().count(method[off - 1]) != 0;
      bool after_one = off >= 2 && testing::OffsetTwoByteCpOpcodes().count(method[off - 2]) != 0;
      EXPECT_TRUE(direct || after_one) << off;
    }
  }
}

// Count of constant-pool operands computed from the parsed source.
size_t SourceCpOperands(const jca::JcaPackage& pkg) {
  static const std::set<std::string> kNoCp = {"newarray"};
  size_t n = 0;
  for (const auto& cls : pkg.classes) {
    for (const auto& m : cls.methods) {
      for (const auto& ins : m.body) {
        const std::string& op = ins.mnemonic;
        if (op == "checkcast" || op == "instanceof") {
          int64_t atype = ins.operands.at(0).value;
          n += (atype == 0 || atype == 14) ? 1 : 0;
        } else if (op.rfind("getstatic", 0) == 0 || op.rfind("putstatic", 0) == 0 ||
                   op.rfind("getfield", 0) == 0 || op.rfind("putfield", 0) == 0 ||
                   op.rfind("invoke", 0) == 0 || op == "new" || op == "anewarray") {
          ++n;
        }
      }
    }
  }
  return n;
}

TEST(CapBuilder, EveryConstantPoolOperandIsRelocated) {
  Corpus corpus;
  auto caps = corpus.BuildAll();
  for (size_t i = 0; i < caps.size(); ++i) {
    auto refs = testing::ReadRefLocation(caps[i].Get(ComponentKind::kReferenceLocation).info);
    EXPECT_EQ(refs.byte_index.size() + refs.byte2_index.size(),
              SourceCpOperands(corpus.packages[i]))
        << corpus.packages[i].name;
  }
}

TEST(CapBuilder, AppletOffsetsResolveIntoMethodBodies) {
  for (const CapFile& cap : AllCaps()) {
    if (!cap.Has(ComponentKind::kApplet)) continue;
    SCOPED_TRACE(cap.package_name);
    const Bytes& method = cap.Get(ComponentKind::kMethod).info;
    auto desc = testing::ReadDescriptor(cap.Get(ComponentKind::kDescriptor).info);
    auto handlers = testing::ReadHandlers(method);
    for (const auto& applet : testing::ReadApplets(cap.Get(ComponentKind::kApplet).info)) {
      uint16_t off = applet.install_offset;
      ASSERT_GE(off, 1 + 8 * handlers.size());
      ASSERT_LT(off, method.size());
      auto header = testing::ReadMethodHeader(method, off);
      EXPECT_FALSE(header.abstract);
      EXPECT_EQ(header.nargs, 3);  // byte[] short byte
      auto it = std::find_if(desc.methods.begin(), desc.methods.end(),
                             [&](const auto& m) { return m.offset == off; });
      ASSERT_NE(it, desc.methods.end()) << "install offset names no method";
      EXPECT_TRUE(it->flags & 0x08) << "install is static";
      EXPECT_LE(off + header.size + it->bytecode_count, method.size());
    }
  }
}

TEST(CapBuilder, MethodOffsetsIncreaseInEmissionOrder) {
  for (const CapFile& cap : AllCaps()) {
    auto desc = testing::ReadDescriptor(cap.Get(ComponentKind::kDescriptor).info);
    std::vector<uint16_t> offsets;
    for (const auto& m : desc.methods) {
      if (m.offset != 0) offsets.push_back(m.offset);
    }
    EXPECT_TRUE(std::is_sorted(offsets.begin(), offsets.end())) << cap.package_name;
    EXPECT_EQ(std::adjacent_find(offsets.begin(), offsets.end()), offsets.end());
  }
}

TEST(CapBuilder, BuildsAreByteDeterministic) {
  auto a = AllCaps();
  auto b = AllCaps();
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    for (const auto& [kind, comp] : a[i].components) {
      EXPECT_EQ(comp.info, b[i].Get(kind).info) << a[i].package_name << " " << ComponentName(kind);
    }
    EXPECT_EQ(BuildCapArchive(a[i]), BuildCapArchive(b[i]));
  }
}

TEST(CapBuilder, OptionalComponents) {
  Corpus corpus;
  auto caps = corpus.BuildAll();
  // util and crypto are libraries, wallet is an applet package.
  EXPECT_FALSE(caps[0].Has(ComponentKind::kApplet));
  EXPECT_TRUE(caps[0].Has(ComponentKind::kExport));
  EXPECT_TRUE(caps[2].Has(ComponentKind::kApplet));
  EXPECT_FALSE(caps[2].Has(ComponentKind::kExport));
  for (const auto& cap : caps) EXPECT_TRUE(cap.Has(ComponentKind::kDescriptor));

  const Bytes& util_header = caps[0].Get(ComponentKind::kHeader).info;
  const Bytes& wallet_header = caps[2].Get(ComponentKind::kHeader).info;
  EXPECT_EQ(ReadU4(util_header, 0), 0xDECAFFEDu);
  EXPECT_EQ(util_header[6] & 0x04, 0) << "no applet flag";
  EXPECT_EQ(util_header[6] & 0x02, 0x02);
  EXPECT_EQ(wallet_header[6] & 0x04, 0x04);
  EXPECT_EQ(wallet_header[6] & 0x01, 0x01) << "wallet declares an int field";
}

TEST(CapBuilder, HeaderCarriesPackageIdentity) {
  CapFile cap = BuildFixture("jca/sample.jca");
  const Bytes& h = cap.Get(ComponentKind::kHeader).info;
  EXPECT_EQ(h[4], 2);  // minor
  EXPECT_EQ(h[5], 2);  // major
  EXPECT_EQ(h[7], 0);  // package minor
  EXPECT_EQ(h[8], 1);
  ASSERT_EQ(h[9], 9);
  EXPECT_EQ(Bytes(h.begin() + 10, h.begin() + 19), FromHex("A00000006203010C01"));
  EXPECT_EQ(h[19], 6);
  EXPECT_EQ(std::string(h.begin() + 20, h.end()), "sample");
}

TEST(CapBuilder, StaticArrayInitializer) {
  CapFile cap = BuildFixture("jca/sample.jca");
  const Bytes& sf = cap.Get(ComponentKind::kStaticField).info;
  // image 2, one reference, one array init of byte type with 4 values
  Bytes want = {0x00, 0x02, 0x00, 0x01, 0x00, 0x01, 0x03, 0x00, 0x04,
                0x01, 0x02, 0x03, 0x04, 0x00, 0x00, 0x00, 0x00};
  EXPECT_EQ(sf, want);
  auto dir = testing::ReadDirectory(cap.Get(ComponentKind::kDirectory).info);
  EXPECT_EQ(dir.image_size, 2);
  EXPECT_EQ(dir.array_init_count, 1);
  EXPECT_EQ(dir.array_init_size, 4);
  EXPECT_EQ(dir.import_count, 2);
  EXPECT_EQ(dir.applet_count, 1);
}

TEST(CapBuilder, ConstantPoolClassReferences) {
  CapFile cap = BuildFixture("jca/sample.jca");
  const Bytes& cp = cap.Get(ComponentKind::kConstantPool).info;
  auto entry = [&](size_t i) { return Bytes(cp.begin() + 2 + 4 * i, cp.begin() + 6 + 4 * i); };
  EXPECT_EQ(entry(5), (Bytes{0x01, 0x80, 0x00, 0x00}));  // java/lang Object
  EXPECT_EQ(entry(1), (Bytes{0x01, 0x00, 0x02, 0x00}));  // first class after the u2 pool length
  EXPECT_EQ(entry(0), (Bytes{0x06, 0x81, 0x03, 0x00}));  // external static method
  EXPECT_EQ(entry(3), (Bytes{0x03, 0x81, 0x03, 0x01}));  // external virtual method
}

TEST(CapBuilder, NativeStubLandsInMethodComponent) {
  CapFile cap = BuildFixture("jca/nativedemo.jca");
  EXPECT_TRUE(cap.uses_impdep);
  const Bytes& method = cap.Get(ComponentKind::kMethod).info;
  uint16_t off = cap.method_offsets.at(
      MethodKey("MyClass", "myNativeMethod",
                {Type::Primitive(Type::Kind::kByte), Type::Primitive(Type::Kind::kByte)}));
  auto header = testing::ReadMethodHeader(method, off);
  EXPECT_EQ(header.nargs, 3);  // this, p1, p2
  Bytes body(method.begin() + off + 2, method.begin() + off + 7);
  EXPECT_EQ(body, (Bytes{0x11, 0x00, 0x00, 0xFE, 0x78}));
}

TEST(CapBuilder, HandlerStopBitOnLastOfMethod) {
  Corpus corpus;
  CapFile wallet = BuildCap(corpus.Get("demo.wallet"), corpus.natives, corpus.Options());
  auto handlers = testing::ReadHandlers(wallet.Get(ComponentKind::kMethod).info);
  ASSERT_EQ(handlers.size(), 1u);
  EXPECT_TRUE(handlers[0].stop_bit);
  EXPECT_EQ(handlers[0].catch_type, 12);
  EXPECT_GT(handlers[0].active_length, 0);
}

TEST(CapBuilder, MissingNativeIsBuildError) {
  jca::JcaPackage pkg = jca::ParseJca(testing::ReadFixture("jca/nativedemo.jca"));
  try {
    BuildCap(pkg, jca::NativeMethodTable{});
    FAIL() << "expected BuildError";
  } catch (const BuildError& e) {
    EXPECT_EQ(e.component(), "Method");
  }
}

TEST(CapBuilder, CrossPackageTokenMismatchNamesImport) {
  Corpus corpus;
  jca::JcaPackage wallet = corpus.Get("demo.wallet");
  // Buffer.<init>(short) is token 0; ask for a token util does not have.
  std::get<jca::ExternalMember>(wallet.constant_pool[5].member).member_token = 9;
  auto opts = corpus.Options();
  try {
    BuildCap(wallet, corpus.natives, opts);
    FAIL() << "expected BuildError";
  } catch (const BuildError& e) {
    EXPECT_EQ(e.component(), "ConstantPool");
    EXPECT_NE(std::string(e.what()).find("Import 2"), std::string::npos) << e.what();
  }
}

TEST(CapBuilder, ImportVersionMismatch) {
  Corpus corpus;
  jca::JcaPackage wallet = corpus.Get("demo.wallet");
  wallet.imports[2].version = {2, 0};
  EXPECT_THROW(BuildCap(wallet, corpus.natives, corpus.Options()), BuildError);
}

TEST(CapBuilder, UnknownImportsAreNotChecked) {
  // javacard/framework is not part of the corpus; only its references go unchecked.
  Corpus corpus;
  EXPECT_NO_THROW(BuildCap(corpus.Get("demo.wallet"), corpus.natives, {}));
}

TEST(CapArtifact, ArchiveHoldsEveryComponent) {
  Corpus corpus;
  CapFile cap = BuildCap(corpus.Get("demo.util"), corpus.natives, corpus.Options());
  auto entries = testing::ReadStoredZip(BuildCapArchive(cap));
  ASSERT_EQ(entries.size(), cap.components.size());
  for (const auto& e : entries) {
    EXPECT_EQ(e.name.rfind("demo/util/javacard/", 0), 0u) << e.name;
    EXPECT_EQ(e.method, 0);
    EXPECT_EQ(e.crc, testing::Crc32Bitwise(e.data)) << e.name;
    ASSERT_GE(e.data.size(), 3u);
    auto kind = ComponentFromTag(e.data[0]);
    ASSERT_TRUE(kind.has_value());
    EXPECT_EQ(e.name, ArchiveEntryName(cap, *kind));
    EXPECT_EQ(ReadU2(e.data, 1), e.data.size() - 3);
    EXPECT_EQ(Bytes(e.data.begin() + 3, e.data.end()), cap.Get(*kind).info);
  }
  EXPECT_EQ(entries.front().name, "demo/util/javacard/Header.cap");
}

TEST(CapArtifact, ExportWritesFilesAndManifest) {
  Corpus corpus;
  auto caps = corpus.BuildAll();
  auto dir = std::filesystem::temp_directory_path() / "jcimage_cap_artifact_test";
  std::filesystem::remove_all(dir);
  CapArtifact art = ExportCapArtifact(caps[1], dir);
  EXPECT_EQ(art.component_files.size(), caps[1].components.size());
  for (const auto& p : art.component_files) EXPECT_TRUE(std::filesystem::exists(p)) << p;
  EXPECT_EQ(art.archive, dir / "crypto.cap");
  EXPECT_EQ(ReadFileBytes(art.archive), BuildCapArchive(caps[1]));

  auto crypto = ManifestEntry(caps[1]);
  EXPECT_EQ(crypto["package"], "demo.crypto");
  EXPECT_EQ(crypto["bcv_expected"], false);
  EXPECT_EQ(ManifestEntry(caps[0])["bcv_expected"], true);
  EXPECT_EQ(crypto["components"]["Method"], caps[1].Get(ComponentKind::kMethod).size());
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace jcimage::cap
