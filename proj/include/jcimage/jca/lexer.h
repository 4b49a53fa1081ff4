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

namespace jcimage::jca {

enum class TokenKind {
  kDot,
  kLBrace,
  kRBrace,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kSemicolon,
  kColon,
  kComma,
  kEquals,
  kMinus,
  kIdent,
  kHexLiteral,
  kDecLiteral,
  kEnd,
};

const char* TokenKindName(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;
  uint64_t value = 0;  // literals only
  uint32_t line = 1;
  uint32_t column = 1;

  bool is_literal() const { return kind == TokenKind::kHexLiteral || kind == TokenKind::kDecLiteral; }
  bool Is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
};

class LexError : public InputError {
 public:
  LexError(uint32_t line, uint32_t column, std::string fragment);
  uint32_t line() const { return line_; }
  uint32_t column() const { return column_; }
  const std::string& fragment() const { return fragment_; }

 private:
  uint32_t line_;
  uint32_t column_;
  std::string fragment_;
};

// Splits JCA text into tokens. Comments and whitespace are dropped. The
// returned list always ends with a kEnd token.
std::vector<Token> Tokenize(std::string_view text);

}  // namespace jcimage::jca
