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

#include "jcimage/jca/parser.h"

#include <algorithm>
#include <set>

namespace jcimage::jca {
namespace {

std::string Describe(const Token& t) {
  if (t.kind == TokenKind::kEnd) return "end of input";
  return "'" + t.text + "'";
}

bool IsPrimitiveName(std::string_view s) {
  return s == "byte" || s == "boolean" || s == "short" || s == "int";
}

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {
    if (toks_.empty() || toks_.back().kind != TokenKind::kEnd) {
      Token end;
      end.kind = TokenKind::kEnd;
      if (!toks_.empty()) {
        end.line = toks_.back().line;
        end.column = toks_.back().column;
      }
      owned_ = toks_;
      owned_.push_back(end);
      view_ = &owned_;
    } else {
      view_ = &toks_;
    }
  }

  JcaPackage Package() {
    JcaPackage pkg;
    ExpectDirective("package");
    pkg.name = QualifiedName();
    Expect(TokenKind::kLBrace, "'{'");
    std::set<std::string> seen;
    auto once = [&](const std::string& section) {
      if (!seen.insert(section).second) Fail("at most one ." + section);
    };
    while (!Accept(TokenKind::kRBrace)) {
      if (AtDirective("aid")) {
        once("aid");
        Skip(2);
        pkg.aid = Aid();
        Expect(TokenKind::kSemicolon, "';'");
      } else if (AtDirective("version")) {
        once("version");
        Skip(2);
        pkg.version = VersionPair();
        Expect(TokenKind::kSemicolon, "';'");
      } else if (AtDirective("imports")) {
        once("imports");
        Skip(2);
        Imports(pkg);
      } else if (AtDirective("applets")) {
        once("applets");
        Skip(2);
        Applets(pkg);
      } else if (AtDirective("constantPool") ||
                 (AtDirective("constant") && Peek(2).Is(TokenKind::kIdent, "pool"))) {
        once("constantPool");
        Skip(Peek(1).text == "constant" ? 3 : 2);
        ConstantPool(pkg);
      } else if (AtDirective("class") || AtDirective("interface")) {
        pkg.classes.push_back(Class());
      } else {
        Fail("package item");
      }
    }
    if (Peek().kind != TokenKind::kEnd) Fail("end of input");
    if (!seen.count("aid")) throw SemanticError("package " + pkg.name + ": missing .aid");
    if (!seen.count("version")) throw SemanticError("package " + pkg.name + ": missing .version");
    return pkg;
  }

 private:
  const Token& Peek(size_t ahead = 0) const {
    const auto& t = *view_;
    return t[std::min(pos_ + ahead, t.size() - 1)];
  }

  const Token& Take() {
    const Token& t = Peek();
    if (pos_ + 1 < view_->size()) ++pos_;
    return t;
  }

  void Skip(size_t n) {
    for (size_t i = 0; i < n; ++i) Take();
  }

  [[noreturn]] void Fail(const std::string& expected) const {
    const Token& t = Peek();
    throw ParseError(t.line, t.column, expected, Describe(t));
  }

  const Token& Expect(TokenKind kind, const char* what) {
    if (Peek().kind != kind) Fail(what);
    return Take();
  }

  bool Accept(TokenKind kind) {
    if (Peek().kind != kind) return false;
    Take();
    return true;
  }

  bool AcceptWord(std::string_view word) {
    if (!Peek().Is(TokenKind::kIdent, word)) return false;
    Take();
    return true;
  }

  bool AtDirective(std::string_view word) const {
    return Peek().kind == TokenKind::kDot && Peek(1).Is(TokenKind::kIdent, word);
  }

  void ExpectDirective(std::string_view word) {
    if (!AtDirective(word)) Fail("'." + std::string(word) + "'");
    Skip(2);
  }

  std::string Ident(const char* what = "identifier") {
    return Expect(TokenKind::kIdent, what).text;
  }

  uint64_t Literal(const char* what = "integer literal") {
    if (!Peek().is_literal()) Fail(what);
    return Take().value;
  }

  int64_t SignedLiteral() {
    bool negative = Accept(TokenKind::kMinus);
    int64_t v = static_cast<int64_t>(Literal());
    return negative ? -v : v;
  }

  uint8_t U8(const char* what) {
    if (!Peek().is_literal() || Peek().value > 0xFF) Fail(what);
    return static_cast<uint8_t>(Take().value);
  }

  std::string QualifiedName() {
    std::string name = Ident("package name");
    while (Peek().kind == TokenKind::kDot && Peek(1).kind == TokenKind::kIdent) {
      Take();
      name += "." + Take().text;
    }
    return name;
  }

  Bytes Aid() {
    Bytes aid;
    aid.push_back(U8("AID byte"));
    while (Accept(TokenKind::kColon)) aid.push_back(U8("AID byte"));
    return aid;
  }

  Version VersionPair() {
    Version v;
    v.major = U8("major version");
    Expect(TokenKind::kDot, "'.'");
    v.minor = U8("minor version");
    return v;
  }

  void Imports(JcaPackage& pkg) {
    Expect(TokenKind::kLBrace, "'{'");
    while (!Accept(TokenKind::kRBrace)) {
      ImportEntry entry;
      entry.aid = Aid();
      entry.version = VersionPair();
      entry.local_token = static_cast<uint8_t>(pkg.imports.size());
      Expect(TokenKind::kSemicolon, "';'");
      pkg.imports.push_back(std::move(entry));
    }
  }

  void Applets(JcaPackage& pkg) {
    Expect(TokenKind::kLBrace, "'{'");
    while (!Accept(TokenKind::kRBrace)) {
      AppletDecl applet;
      applet.aid = Aid();
      applet.class_name = Ident("applet class name");
      Expect(TokenKind::kSemicolon, "';'");
      pkg.applets.push_back(std::move(applet));
    }
  }

  ClassTarget ClassRef() {
    if (Peek().is_literal()) {
      ExternalClass ext;
      ext.package_token = U8("package token");
      Expect(TokenKind::kDot, "'.'");
      ext.class_token = U8("class token");
      return ext;
    }
    if (Peek().kind == TokenKind::kIdent && !IsPrimitiveName(Peek().text) &&
        Peek().text != "void") {
      return Take().text;
    }
    Fail("class reference");
  }

  Type ParseType(bool allow_void) {
    Type type;
    const Token& t = Peek();
    if (t.kind == TokenKind::kIdent && t.text == "void") {
      if (!allow_void) Fail("type");
      Take();
      return Type::Void();
    }
    if (t.kind == TokenKind::kIdent && IsPrimitiveName(t.text)) {
      std::string name = Take().text;
      type.kind = name == "byte"      ? Type::Kind::kByte
                  : name == "boolean" ? Type::Kind::kBoolean
                  : name == "short"   ? Type::Kind::kShort
                                      : Type::Kind::kInt;
    } else if (t.kind == TokenKind::kIdent || t.is_literal()) {
      type.kind = Type::Kind::kReference;
      type.reference = ClassRef();
    } else {
      Fail("type");
    }
    if (Accept(TokenKind::kLBracket)) {
      Expect(TokenKind::kRBracket, "']'");
      type.array = true;
    }
    return type;
  }

  std::vector<Type> TypeList() {
    std::vector<Type> types;
    Expect(TokenKind::kLParen, "'('");
    if (Accept(TokenKind::kRParen)) return types;
    do {
      types.push_back(ParseType(false));
    } while (Accept(TokenKind::kComma));
    Expect(TokenKind::kRParen, "')'");
    return types;
  }

  std::variant<InternalMember, ExternalMember> MemberTarget() {
    if (Peek().is_literal()) {
      ExternalMember ext;
      ext.package_token = U8("package token");
      Expect(TokenKind::kDot, "'.'");
      ext.class_token = U8("class token");
      Expect(TokenKind::kDot, "'.'");
      ext.member_token = U8("member token");
      return ext;
    }
    InternalMember member;
    member.class_name = Ident("class name");
    Expect(TokenKind::kDot, "'.'");
    member.member_name = Ident("member name");
    return member;
  }

  void ConstantPool(JcaPackage& pkg) {
    Expect(TokenKind::kLBrace, "'{'");
    while (!Accept(TokenKind::kRBrace)) {
      const Token& kw = Peek();
      CpEntry entry;
      if (kw.Is(TokenKind::kIdent, "classRef")) {
        Take();
        entry.kind = CpKind::kClassRef;
        entry.class_target = ClassRef();
      } else if (kw.Is(TokenKind::kIdent, "instanceFieldRef") ||
                 kw.Is(TokenKind::kIdent, "staticFieldRef")) {
        entry.kind = Take().text == "staticFieldRef" ? CpKind::kStaticFieldRef
                                                      : CpKind::kInstanceFieldRef;
        entry.field_type = ParseType(false);
        entry.member = MemberTarget();
      } else if (kw.Is(TokenKind::kIdent, "virtualMethodRef") ||
                 kw.Is(TokenKind::kIdent, "superMethodRef") ||
                 kw.Is(TokenKind::kIdent, "staticMethodRef")) {
        std::string k = Take().text;
        entry.kind = k == "virtualMethodRef" ? CpKind::kVirtualMethodRef
                     : k == "superMethodRef" ? CpKind::kSuperMethodRef
                                             : CpKind::kStaticMethodRef;
        entry.return_type = ParseType(true);
        entry.member = MemberTarget();
        entry.params = TypeList();
      } else {
        Fail("constant pool entry");
      }
      Expect(TokenKind::kSemicolon, "';'");
      pkg.constant_pool.push_back(std::move(entry));
    }
  }

  std::vector<ClassTarget> ClassRefBlock() {
    std::vector<ClassTarget> refs;
    Expect(TokenKind::kLBrace, "'{'");
    while (!Accept(TokenKind::kRBrace)) {
      refs.push_back(ClassRef());
      Expect(TokenKind::kSemicolon, "';'");
    }
    return refs;
  }

  JcaClass Class() {
    JcaClass cls;
    Take();
    cls.is_interface = Take().text == "interface";
    bool saw_access = false;
    while (Peek().kind == TokenKind::kIdent) {
      const std::string& w = Peek().text;
      if (w == "public" || w == "package") {
        if (saw_access) Fail("class name");
        saw_access = true;
        cls.access = w == "public" ? Access::kPublic : Access::kPackage;
      } else if (w == "abstract") {
        cls.is_abstract = true;
      } else if (w == "final") {
        cls.is_final = true;
      } else if (w == "shareable") {
        cls.is_shareable = true;
      } else if (w == "remote") {
        cls.is_remote = true;
      } else {
        break;
      }
      Take();
    }
    cls.name = Ident("class name");
    if (Peek().is_literal()) cls.token = U8("class token");
    if (AcceptWord("extends")) {
      if (cls.is_interface) {
        do {
          cls.superinterfaces.push_back(ClassRef());
        } while (Accept(TokenKind::kComma));
      } else {
        cls.superclass = ClassRef();
      }
    }
    Expect(TokenKind::kLBrace, "'{'");
    while (!Accept(TokenKind::kRBrace)) {
      if (AtDirective("shareableInterfaces")) {
        Skip(2);
        cls.shareable_interfaces = ClassRefBlock();
      } else if (AtDirective("remoteInterfaces")) {
        Skip(2);
        cls.remote_interfaces = ClassRefBlock();
      } else if (AtDirective("fields")) {
        Skip(2);
        Expect(TokenKind::kLBrace, "'{'");
        while (!Accept(TokenKind::kRBrace)) cls.fields.push_back(Field());
      } else if (AtDirective("publicMethodTable")) {
        Skip(2);
        cls.public_method_table_base = U8("method table base");
        cls.public_method_table = SelectorBlock();
      } else if (AtDirective("packageMethodTable")) {
        Skip(2);
        cls.package_method_table_base = U8("method table base");
        cls.package_method_table = SelectorBlock();
      } else if (AtDirective("implementedInterfaceInfoTable")) {
        Skip(2);
        Expect(TokenKind::kLBrace, "'{'");
        while (!Accept(TokenKind::kRBrace)) {
          ExpectDirective("interface");
          InterfaceImpl impl;
          impl.interface = ClassRef();
          Expect(TokenKind::kLBrace, "'{'");
          while (!Accept(TokenKind::kRBrace)) {
            impl.method_tokens.push_back(U8("method token"));
            Expect(TokenKind::kSemicolon, "';'");
          }
          cls.interface_impls.push_back(std::move(impl));
        }
      } else if (AtDirective("method")) {
        Skip(2);
        cls.methods.push_back(Method());
      } else {
        Fail("class item");
      }
    }
    return cls;
  }

  std::vector<MethodSelector> SelectorBlock() {
    std::vector<MethodSelector> selectors;
    Expect(TokenKind::kLBrace, "'{'");
    while (!Accept(TokenKind::kRBrace)) {
      MethodSelector sel;
      sel.name = Ident("method name");
      sel.params = TypeList();
      Expect(TokenKind::kSemicolon, "';'");
      selectors.push_back(std::move(sel));
    }
    return selectors;
  }

  // Returns true if the word was a member modifier.
  static bool ApplyAccess(const std::string& w, Access& access) {
    if (w == "public") {
      access = Access::kPublic;
    } else if (w == "protected") {
      access = Access::kProtected;
    } else if (w == "package") {
      access = Access::kPackage;
    } else if (w == "private") {
      access = Access::kPrivate;
    } else {
      return false;
    }
    return true;
  }

  JcaField Field() {
    JcaField field;
    bool saw_access = false;
    while (Peek().kind == TokenKind::kIdent) {
      const std::string& w = Peek().text;
      if (ApplyAccess(w, field.access)) {
        if (saw_access) Fail("field type");
        saw_access = true;
      } else if (w == "static") {
        field.is_static = true;
      } else if (w == "final") {
        field.is_final = true;
      } else if (w == "transient") {
        field.is_transient = true;
      } else {
        break;
      }
      Take();
    }
    field.type = ParseType(false);
    field.name = Ident("field name");
    if (Peek().is_literal()) field.token = U8("field token");
    if (Accept(TokenKind::kEquals)) {
      FieldInitializer init;
      if (Accept(TokenKind::kLBrace)) {
        init.array = true;
        if (!Accept(TokenKind::kRBrace)) {
          do {
            init.values.push_back(SignedLiteral());
          } while (Accept(TokenKind::kComma));
          Expect(TokenKind::kRBrace, "'}'");
        }
      } else {
        init.values.push_back(SignedLiteral());
      }
      field.initializer = std::move(init);
    }
    Expect(TokenKind::kSemicolon, "';'");
    return field;
  }

  JcaMethod Method() {
    JcaMethod method;
    bool saw_access = false;
    while (Peek().kind == TokenKind::kIdent) {
      const std::string& w = Peek().text;
      if (ApplyAccess(w, method.access)) {
        if (saw_access) Fail("return type");
        saw_access = true;
      } else if (w == "static") {
        method.is_static = true;
      } else if (w == "final") {
        method.is_final = true;
      } else if (w == "abstract") {
        method.is_abstract = true;
      } else if (w == "native") {
        method.is_native = true;
      } else {
        break;
      }
      Take();
    }
    method.return_type = ParseType(true);
    method.name = Ident("method name");
    Expect(TokenKind::kLParen, "'('");
    if (!Accept(TokenKind::kRParen)) {
      do {
        method.params.push_back(ParseType(false));
        method.param_names.push_back(Peek().kind == TokenKind::kIdent ? Take().text : "");
      } while (Accept(TokenKind::kComma));
      Expect(TokenKind::kRParen, "')'");
    }
    if (Peek().is_literal()) method.token = U8("method token");
    if (Accept(TokenKind::kSemicolon)) return method;
    Expect(TokenKind::kLBrace, "';' or '{'");
    method.has_body = true;
    std::vector<std::string> pending;
    while (!Accept(TokenKind::kRBrace)) {
      if (AtDirective("stack")) {
        Skip(2);
        method.max_stack = U8("max stack");
        Expect(TokenKind::kSemicolon, "';'");
      } else if (AtDirective("locals")) {
        Skip(2);
        method.max_locals = U8("max locals");
        Expect(TokenKind::kSemicolon, "';'");
      } else if (AtDirective("args")) {
        Skip(2);
        method.declared_nargs = U8("argument count");
        Expect(TokenKind::kSemicolon, "';'");
      } else if (AtDirective("exceptionTable")) {
        Skip(2);
        ExceptionTable(method);
      } else if (Peek().kind == TokenKind::kIdent && Peek(1).kind == TokenKind::kColon) {
        pending.push_back(Take().text);
        Take();
      } else if (Peek().kind == TokenKind::kIdent) {
        Instruction ins;
        ins.labels = std::move(pending);
        pending.clear();
        ins.mnemonic = Take().text;
        while (!Accept(TokenKind::kSemicolon)) {
          if (Peek().kind == TokenKind::kIdent) {
            ins.operands.push_back(Operand::Label(Take().text));
          } else if (Peek().is_literal() || Peek().kind == TokenKind::kMinus) {
            ins.operands.push_back(Operand::Immediate(SignedLiteral()));
          } else {
            Fail("operand or ';'");
          }
        }
        method.body.push_back(std::move(ins));
      } else {
        Fail("instruction or method directive");
      }
    }
    method.trailing_labels = std::move(pending);
    return method;
  }

  void ExceptionTable(JcaMethod& method) {
    Expect(TokenKind::kLBrace, "'{'");
    while (!Accept(TokenKind::kRBrace)) {
      ExceptionHandler h;
      h.start_label = Ident("start label");
      h.end_label = Ident("end label");
      h.handler_label = Ident("handler label");
      if (AcceptWord("any")) {
        h.catch_type = 0;
      } else {
        uint64_t index = Literal("constant pool index or 'any'");
        if (index == 0 || index > 0xFFFF) Fail("constant pool index in 1..65535 or 'any'");
        h.catch_type = static_cast<uint16_t>(index);
      }
      Expect(TokenKind::kSemicolon, "';'");
      method.handlers.push_back(std::move(h));
    }
  }

  const std::vector<Token>& toks_;
  std::vector<Token> owned_;
  const std::vector<Token>* view_ = nullptr;
  size_t pos_ = 0;
};

}  // namespace

ParseError::ParseError(uint32_t line, uint32_t column, std::string expected, std::string found)
    : InputError("jca_frontend", std::to_string(line) + ":" + std::to_string(column) +
                                     ": expected " + expected + ", found " + found),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

JcaPackage ParsePackage(const std::vector<Token>& tokens) {
  JcaPackage pkg = Parser(tokens).Package();
  AssignDefaultTokens(pkg);
  ValidatePackage(pkg);
  return pkg;
}

JcaPackage ParseJca(std::string_view text) { return ParsePackage(Tokenize(text)); }

}  // namespace jcimage::jca
