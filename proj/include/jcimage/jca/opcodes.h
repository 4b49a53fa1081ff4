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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jcimage::jca {

enum class OperandKind {
  kS1,
  kS2,
  kS4,
  kU1,
  kCp1,
  kCp2,
  kBr1,
  kBr2,
  kAtype,
  kSTableSwitch,
  kITableSwitch,
  kSLookupSwitch,
  kILookupSwitch,
};

std::optional<OperandKind> ParseOperandKind(std::string_view name);
bool IsSwitchKind(OperandKind kind);

struct OpcodeInfo {
  std::string mnemonic;
  uint8_t opcode = 0;
  std::vector<OperandKind> operands;

  bool is_switch() const { return operands.size() == 1 && IsSwitchKind(operands[0]); }
};

// The instruction table shipped in data/jcvm_instructions.tsv, compiled in.
const std::vector<OpcodeInfo>& InstructionTable();
const OpcodeInfo* FindOpcode(std::string_view mnemonic);
const OpcodeInfo* FindOpcode(uint8_t opcode);

// Parses the TSV form of the table. Throws InputError on malformed rows.
std::vector<OpcodeInfo> ParseInstructionTable(std::string_view tsv);

// Number of text operands an instruction takes given the operands seen so far.
// Fixed-arity instructions ignore `operands`; switch instructions read their
// bounds from it. Returns nullopt if the bounds are not yet known or invalid.
std::optional<size_t> ExpectedOperandCount(const OpcodeInfo& info,
                                           const std::vector<int64_t>& leading_immediates);

inline constexpr uint8_t kImpdep1 = 254;
inline constexpr uint8_t kImpdep2 = 255;

}  // namespace jcimage::jca
