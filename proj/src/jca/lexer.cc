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

#include "jcimage/jca/lexer.h"

#include <limits>

namespace jcimage::jca {
namespace {

bool IsIdentStart(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$';
}

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

bool IsIdentPart(char c) { return IsIdentStart(c) || IsDigit(c); }

bool IsHexDigit(char c) {
  return IsDigit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> Run() {
    std::vector<Token> tokens;
    while (true) {
      SkipTrivia();
      if (pos_ >= text_.size()) break;
      tokens.push_back(Next());
    }
    Token end;
    end.kind = TokenKind::kEnd;
    end.line = line_;
    end.column = column_;
    tokens.push_back(end);
    return tokens;
  }

 private:
  char Peek(size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void Advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void SkipTrivia() {
    while (pos_ < text_.size()) {
      char c = Peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        Advance();
      } else if (c == '/' && Peek(1) == '/') {
        while (pos_ < text_.size() && Peek() != '\n') Advance();
      } else if (c == '/' && Peek(1) == '*') {
        uint32_t line = line_, column = column_;
        Advance();
        Advance();
        while (pos_ < text_.size() && !(Peek() == '*' && Peek(1) == '/')) Advance();
        if (pos_ >= text_.size()) throw LexError(line, column, "/*");
        Advance();
        Advance();
      } else {
        return;
      }
    }
  }

  Token Make(TokenKind kind, size_t start, uint32_t line, uint32_t column) {
    Token t;
    t.kind = kind;
    t.text = std::string(text_.substr(start, pos_ - start));
    t.line = line;
    t.column = column;
    return t;
  }

  Token Next() {
    const size_t start = pos_;
    const uint32_t line = line_, column = column_;
    const char c = Peek();

    auto single = [&](TokenKind kind) {
      Advance();
      return Make(kind, start, line, column);
    };
    switch (c) {
      case '.':
        return single(TokenKind::kDot);
      case '{':
        return single(TokenKind::kLBrace);
      case '}':
        return single(TokenKind::kRBrace);
      case '(':
        return single(TokenKind::kLParen);
      case ')':
        return single(TokenKind::kRParen);
      case '[':
        return single(TokenKind::kLBracket);
      case ']':
        return single(TokenKind::kRBracket);
      case ';':
        return single(TokenKind::kSemicolon);
      case ':':
        return single(TokenKind::kColon);
      case ',':
        return single(TokenKind::kComma);
      case '=':
        return single(TokenKind::kEquals);
      case '-':
        return single(TokenKind::kMinus);
      default:
        break;
    }

    if (IsIdentStart(c)) {
      while (IsIdentPart(Peek())) Advance();
      return Make(TokenKind::kIdent, start, line, column);
    }

    // <init> and <clinit>
    if (c == '<') {
      size_t n = 1;
      while (IsIdentPart(Peek(n))) ++n;
      if (n > 1 && Peek(n) == '>') {
        for (size_t i = 0; i <= n; ++i) Advance();
        return Make(TokenKind::kIdent, start, line, column);
      }
      throw LexError(line, column, Fragment(start));
    }

    if (IsDigit(c)) return Number(start, line, column);

    throw LexError(line, column, Fragment(start));
  }

  Token Number(size_t start, uint32_t line, uint32_t column) {
    uint64_t value = 0;
    TokenKind kind = TokenKind::kDecLiteral;
    auto overflow = [&] { return LexError(line, column, Fragment(start)); };
    if (Peek() == '0' && (Peek(1) == 'x' || Peek(1) == 'X')) {
      kind = TokenKind::kHexLiteral;
      Advance();
      Advance();
      if (!IsHexDigit(Peek())) throw LexError(line, column, Fragment(start));
      while (IsHexDigit(Peek())) {
        char h = Peek();
        int digit = IsDigit(h) ? h - '0' : (h | 0x20) - 'a' + 10;
        if (value > (std::numeric_limits<uint32_t>::max() >> 4)) throw overflow();
        value = (value << 4) | static_cast<uint64_t>(digit);
        Advance();
      }
    } else {
      while (IsDigit(Peek())) {
        value = value * 10 + static_cast<uint64_t>(Peek() - '0');
        if (value > std::numeric_limits<uint32_t>::max()) throw overflow();
        Advance();
      }
    }
    // 12ab, 0x1g
    if (IsIdentPart(Peek())) {
      while (IsIdentPart(Peek())) Advance();
      throw LexError(line, column, Fragment(start));
    }
    Token t = Make(kind, start, line, column);
    t.value = value;
    return t;
  }

  std::string Fragment(size_t start) const {
    size_t end = start;
    while (end < text_.size() && end - start < 16 && text_[end] != ' ' && text_[end] != '\n' &&
           text_[end] != '\t' && text_[end] != '\r') {
      ++end;
    }
    if (end == start) end = start + 1;
    return std::string(text_.substr(start, end - start));
  }

  std::string_view text_;
  size_t pos_ = 0;
  uint32_t line_ = 1;
  uint32_t column_ = 1;
};

}  // namespace

const char* TokenKindName(TokenKind kind) {
  switch (kind) {
    case TokenKind::kDot:
      return "'.'";
    case TokenKind::kLBrace:
      return "'{'";
    case TokenKind::kRBrace:
      return "'}'";
    case TokenKind::kLParen:
      return "'('";
    case TokenKind::kRParen:
      return "')'";
    case TokenKind::kLBracket:
      return "'['";
    case TokenKind::kRBracket:
      return "']'";
    case TokenKind::kSemicolon:
      return "';'";
    case TokenKind::kColon:
      return "':'";
    case TokenKind::kComma:
      return "','";
    case TokenKind::kEquals:
      return "'='";
    case TokenKind::kMinus:
      return "'-'";
    case TokenKind::kIdent:
      return "identifier";
    case TokenKind::kHexLiteral:
      return "hex literal";
    case TokenKind::kDecLiteral:
      return "decimal literal";
    case TokenKind::kEnd:
      return "end of input";
  }
  return "?";
}

LexError::LexError(uint32_t line, uint32_t column, std::string fragment)
    : InputError("jca_frontend", std::to_string(line) + ":" + std::to_string(column) +
                                     ": unrecognized input '" + fragment + "'"),
      line_(line),
      column_(column),
      fragment_(std::move(fragment)) {}

std::vector<Token> Tokenize(std::string_view text) { return Lexer(text).Run(); }

}  // namespace jcimage::jca
