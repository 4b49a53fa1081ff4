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

#include "jcimage/jca/opcodes.h"

#include <array>
#include <sstream>
#include <unordered_map>

#include "jcimage/error.h"

namespace jcimage::jca {
namespace internal {
extern const std::string_view kInstructionTableTsv;
}  // namespace internal

namespace {

struct KindName {
  std::string_view name;
  OperandKind kind;
};

constexpr std::array<KindName, 13> kKindNames = {{
    {"s1", OperandKind::kS1},
    {"s2", OperandKind::kS2},
    {"s4", OperandKind::kS4},
    {"u1", OperandKind::kU1},
    {"cp1", OperandKind::kCp1},
    {"cp2", OperandKind::kCp2},
    {"br1", OperandKind::kBr1},
    {"br2", OperandKind::kBr2},
    {"atype", OperandKind::kAtype},
    {"stableswitch", OperandKind::kSTableSwitch},
    {"itableswitch", OperandKind::kITableSwitch},
    {"slookupswitch", OperandKind::kSLookupSwitch},
    {"ilookupswitch", OperandKind::kILookupSwitch},
}};

struct Index {
  std::vector<OpcodeInfo> table;
  std::unordered_map<std::string, size_t> by_name;
  std::array<int, 256> by_opcode{};
};

const Index& GetIndex() {
  static const Index index = [] {
    Index idx;
    idx.table = ParseInstructionTable(internal::kInstructionTableTsv);
    idx.by_opcode.fill(-1);
    for (size_t i = 0; i < idx.table.size(); ++i) {
      idx.by_name.emplace(idx.table[i].mnemonic, i);
      idx.by_opcode[idx.table[i].opcode] = static_cast<int>(i);
    }
    return idx;
  }();
  return index;
}

}  // namespace

std::optional<OperandKind> ParseOperandKind(std::string_view name) {
  for (const KindName& k : kKindNames) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

bool IsSwitchKind(OperandKind kind) {
  return kind == OperandKind::kSTableSwitch || kind == OperandKind::kITableSwitch ||
         kind == OperandKind::kSLookupSwitch || kind == OperandKind::kILookupSwitch;
}

std::vector<OpcodeInfo> ParseInstructionTable(std::string_view tsv) {
  std::vector<OpcodeInfo> table;
  std::istringstream in{std::string(tsv)};
  std::string line;
  size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    return InputError("jca_frontend",
                      "instruction table line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    size_t tab1 = line.find('\t');
    if (tab1 == std::string::npos) throw fail("missing opcode column");
    size_t tab2 = line.find('\t', tab1 + 1);
    std::string opcode_text = line.substr(tab1 + 1, tab2 == std::string::npos ? std::string::npos
                                                                              : tab2 - tab1 - 1);
    OpcodeInfo info;
    info.mnemonic = line.substr(0, tab1);
    int opcode = -1;
    try {
      size_t used = 0;
      opcode = std::stoi(opcode_text, &used);
      if (used != opcode_text.size()) opcode = -1;
    } catch (const std::exception&) {
      opcode = -1;
    }
    if (opcode < 0 || opcode > 255) throw fail("bad opcode '" + opcode_text + "'");
    info.opcode = static_cast<uint8_t>(opcode);
    if (tab2 != std::string::npos) {
      std::istringstream kinds(line.substr(tab2 + 1));
      std::string kind;
      while (kinds >> kind) {
        auto parsed = ParseOperandKind(kind);
        if (!parsed) throw fail("unknown operand kind '" + kind + "'");
        info.operands.push_back(*parsed);
      }
    }
    for (const OpcodeInfo& other : table) {
      if (other.mnemonic == info.mnemonic || other.opcode == info.opcode) {
        throw fail("duplicate entry for '" + info.mnemonic + "'");
      }
    }
    table.push_back(std::move(info));
  }
  return table;
}

const std::vector<OpcodeInfo>& InstructionTable() { return GetIndex().table; }

const OpcodeInfo* FindOpcode(std::string_view mnemonic) {
  const Index& idx = GetIndex();
  auto it = idx.by_name.find(std::string(mnemonic));
  return it == idx.by_name.end() ? nullptr : &idx.table[it->second];
}

const OpcodeInfo* FindOpcode(uint8_t opcode) {
  const Index& idx = GetIndex();
  int i = idx.by_opcode[opcode];
  return i < 0 ? nullptr : &idx.table[static_cast<size_t>(i)];
}

std::optional<size_t> ExpectedOperandCount(const OpcodeInfo& info,
                                           const std::vector<int64_t>& leading) {
  if (!info.is_switch()) return info.operands.size();
  switch (info.operands[0]) {
    case OperandKind::kSTableSwitch:
    case OperandKind::kITableSwitch: {
      // default low high L...
      if (leading.size() < 2) return std::nullopt;
      int64_t low = leading[0], high = leading[1];
      if (high < low || high - low >= 0x10000) return std::nullopt;
      return static_cast<size_t>(3 + (high - low + 1));
    }
    case OperandKind::kSLookupSwitch:
    case OperandKind::kILookupSwitch: {
      // default npairs (match L)...
      if (leading.empty()) return std::nullopt;
      int64_t npairs = leading[0];
      if (npairs < 0 || npairs > 0xFFFF) return std::nullopt;
      return static_cast<size_t>(2 + 2 * npairs);
    }
    default:
      return std::nullopt;
  }
}

}  // namespace jcimage::jca
