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
#include <map>
#include <string>
#include <vector>

#include "jcimage/cap/cap_file.h"
#include "jcimage/jca/model.h"

namespace jcimage::cap {

class UnresolvedLabel : public BuildError {
 public:
  explicit UnresolvedLabel(const std::string& label)
      : BuildError("Method", "unresolved label " + label) {}
};

class OperandOverflow : public BuildError {
 public:
  OperandOverflow(const std::string& mnemonic, int64_t value)
      : BuildError("Method", mnemonic + ": operand " + std::to_string(value) +
                                 " does not fit its encoding") {}
};

struct Relocation {
  uint32_t offset = 0;  // of the index operand, from the start of the code
  uint8_t width = 2;    // 1 or 2 byte constant-pool index
  bool operator==(const Relocation&) const = default;
};

struct AssembledCode {
  Bytes bytes;
  std::vector<Relocation> relocations;
  std::map<std::string, uint32_t> labels;
};

// Encodes a method body. Branch operands become offsets relative to the
// branching instruction.
AssembledCode AssembleMethod(const std::vector<jca::Instruction>& body,
                             const std::vector<std::string>& trailing_labels = {});

}  // namespace jcimage::cap
