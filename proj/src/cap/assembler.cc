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

#include "jcimage/cap/assembler.h"

#include "jcimage/jca/opcodes.h"
#include "jcimage/jca/parser.h"

namespace jcimage::cap {
namespace {

using jca::OperandKind;

size_t EncodedSize(const jca::OpcodeInfo& info, const jca::Instruction& ins) {
  size_t size = 1;
  if (info.is_switch()) {
    size_t n = ins.operands.size();
    switch (info.operands[0]) {
      case OperandKind::kSTableSwitch:
        return 1 + 2 + 2 + 2 + 2 * (n - 3);
      case OperandKind::kITableSwitch:
        return 1 + 2 + 4 + 4 + 2 * (n - 3);
      case OperandKind::kSLookupSwitch:
        return 1 + 2 + 2 + 4 * ((n - 2) / 2);
      default:
        return 1 + 2 + 2 + 6 * ((n - 2) / 2);
    }
  }
  for (OperandKind k : info.operands) {
    switch (k) {
      case OperandKind::kS2:
      case OperandKind::kCp2:
      case OperandKind::kBr2:
        size += 2;
        break;
      case OperandKind::kS4:
        size += 4;
        break;
      default:
        size += 1;
        break;
    }
  }
  return size;
}

void Put(ByteWriter& w, const std::string& mnemonic, int64_t v, int64_t lo, int64_t hi,
         int width) {
  if (v < lo || v > hi) throw OperandOverflow(mnemonic, v);
  uint32_t u = static_cast<uint32_t>(v);
  if (width == 1) w.U1(static_cast<uint8_t>(u));
  if (width == 2) w.U2(static_cast<uint16_t>(u));
  if (width == 4) w.U4(u);
}

}  // namespace

AssembledCode AssembleMethod(const std::vector<jca::Instruction>& body,
                             const std::vector<std::string>& trailing_labels) {
  AssembledCode out;
  std::vector<uint32_t> starts;
  uint32_t pc = 0;
  for (const jca::Instruction& ins : body) {
    const jca::OpcodeInfo* info = jca::FindOpcode(ins.mnemonic);
    if (!info) throw BuildError("Method", "unknown mnemonic " + ins.mnemonic);
    for (const std::string& l : ins.labels) out.labels[l] = pc;
    starts.push_back(pc);
    pc += static_cast<uint32_t>(EncodedSize(*info, ins));
  }
  for (const std::string& l : trailing_labels) out.labels[l] = pc;

  ByteWriter w;
  for (size_t i = 0; i < body.size(); ++i) {
    const jca::Instruction& ins = body[i];
    const jca::OpcodeInfo& info = *jca::FindOpcode(ins.mnemonic);
    const int64_t here = starts[i];
    auto branch = [&](const jca::Operand& op) -> int64_t {
      if (op.kind != jca::Operand::Kind::kLabel) {
        throw BuildError("Method", ins.mnemonic + ": branch operand must be a label");
      }
      auto it = out.labels.find(op.label);
      if (it == out.labels.end()) throw UnresolvedLabel(op.label);
      return static_cast<int64_t>(it->second) - here;
    };
    auto imm = [&](const jca::Operand& op) -> int64_t {
      if (op.kind != jca::Operand::Kind::kImmediate) {
        throw BuildError("Method", ins.mnemonic + ": expected an immediate, found " + op.label);
      }
      return op.value;
    };

    w.U1(info.opcode);
    if (info.is_switch()) {
      const auto& ops = ins.operands;
      const OperandKind kind = info.operands[0];
      Put(w, ins.mnemonic, branch(ops.at(0)), -32768, 32767, 2);
      if (kind == OperandKind::kSTableSwitch || kind == OperandKind::kITableSwitch) {
        bool wide = kind == OperandKind::kITableSwitch;
        int64_t lo_limit = wide ? INT32_MIN : -32768, hi_limit = wide ? INT32_MAX : 32767;
        Put(w, ins.mnemonic, imm(ops.at(1)), lo_limit, hi_limit, wide ? 4 : 2);
        Put(w, ins.mnemonic, imm(ops.at(2)), lo_limit, hi_limit, wide ? 4 : 2);
        for (size_t k = 3; k < ops.size(); ++k) {
          Put(w, ins.mnemonic, branch(ops[k]), -32768, 32767, 2);
        }
      } else {
        bool wide = kind == OperandKind::kILookupSwitch;
        int64_t npairs = imm(ops.at(1));
        Put(w, ins.mnemonic, npairs, 0, 0xFFFF, 2);
        int64_t previous = INT64_MIN;
        for (size_t k = 2; k + 1 < ops.size(); k += 2) {
          int64_t match = imm(ops[k]);
          if (match <= previous) {
            throw BuildError("Method", ins.mnemonic + ": match values must ascend");
          }
          previous = match;
          Put(w, ins.mnemonic, match, wide ? INT32_MIN : -32768, wide ? INT32_MAX : 32767,
              wide ? 4 : 2);
          Put(w, ins.mnemonic, branch(ops[k + 1]), -32768, 32767, 2);
        }
      }
      continue;
    }

    if (ins.operands.size() != info.operands.size()) {
      throw BuildError("Method", ins.mnemonic + ": operand count mismatch");
    }
    for (size_t k = 0; k < ins.operands.size(); ++k) {
      const jca::Operand& op = ins.operands[k];
      switch (info.operands[k]) {
        case OperandKind::kS1:
          Put(w, ins.mnemonic, imm(op), -128, 255, 1);
          break;
        case OperandKind::kU1:
        case OperandKind::kAtype:
          Put(w, ins.mnemonic, imm(op), 0, 255, 1);
          break;
        case OperandKind::kS2:
          Put(w, ins.mnemonic, imm(op), -32768, 65535, 2);
          break;
        case OperandKind::kS4:
          Put(w, ins.mnemonic, imm(op), INT32_MIN, UINT32_MAX, 4);
          break;
        case OperandKind::kCp1:
        case OperandKind::kCp2: {
          bool narrow = info.operands[k] == OperandKind::kCp1;
          bool after_atype = k > 0 && info.operands[k - 1] == OperandKind::kAtype;
          if (!after_atype || jca::CpIndexFollowsAtype(ins.operands[k - 1].value)) {
            out.relocations.push_back({static_cast<uint32_t>(w.size()), uint8_t(narrow ? 1 : 2)});
          }
          Put(w, ins.mnemonic, imm(op), 0, narrow ? 0xFF : 0xFFFF, narrow ? 1 : 2);
          break;
        }
        case OperandKind::kBr1:
          Put(w, ins.mnemonic, branch(op), -128, 127, 1);
          break;
        case OperandKind::kBr2:
          Put(w, ins.mnemonic, branch(op), -32768, 32767, 2);
          break;
        default:
          throw BuildError("Method", ins.mnemonic + ": unexpected operand kind");
      }
    }
  }
  out.bytes = w.bytes();
  return out;
}

}  // namespace jcimage::cap
