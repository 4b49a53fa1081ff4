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
#include <string>
#include <string_view>
#include <vector>

#include "jcimage/error.h"
#include "jcimage/jca/lexer.h"
#include "jcimage/jca/model.h"

namespace jcimage::jca {

class ParseError : public InputError {
 public:
  ParseError(uint32_t line, uint32_t column, std::string expected, std::string found);
  uint32_t line() const { return line_; }
  uint32_t column() const { return column_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  uint32_t line_;
  uint32_t column_;
  std::string expected_;
  std::string found_;
};

class SemanticError : public InputError {
 public:
  explicit SemanticError(const std::string& message) : InputError("jca_frontend", message) {}
};

// Parses one package. Absent optional elements default to empty, absent
// tokens are assigned by position, and the result is validated.
JcaPackage ParsePackage(const std::vector<Token>& tokens);
JcaPackage ParseJca(std::string_view text);

// Fills every unset class, field and method token and synthesizes missing
// method tables. Idempotent.
void AssignDefaultTokens(JcaPackage& pkg);

// Throws SemanticError on the first invariant violation.
void ValidatePackage(const JcaPackage& pkg);

// Whether a method is dispatched through a method table.
bool IsVirtual(const JcaMethod& method);

// Static fields that occupy static field image space. Compile-time constants
// (static final primitives with an initializer) are inlined instead.
bool IsAllocatedStatic(const JcaField& field);

// checkcast/instanceof carry a class reference only for these array types.
bool CpIndexFollowsAtype(int64_t atype);

}  // namespace jcimage::jca
