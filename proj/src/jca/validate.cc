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

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "jcimage/jca/opcodes.h"
#include "jcimage/jca/parser.h"

namespace jcimage::jca {
namespace {

bool IsPublicVisible(const JcaMethod& m) {
  return m.access == Access::kPublic || m.access == Access::kProtected;
}

bool InTable(const JcaMethod& m, bool public_table) {
  return IsVirtual(m) && IsPublicVisible(m) == public_table;
}

const JcaClass* InternalSuper(const JcaPackage& pkg, const JcaClass& cls) {
  if (!cls.superclass) return nullptr;
  if (const auto* name = std::get_if<std::string>(&*cls.superclass)) return pkg.FindClass(*name);
  return nullptr;
}

bool HasExternalAncestor(const JcaPackage& pkg, const JcaClass& cls) {
  const JcaClass* c = &cls;
  for (size_t guard = 0; c && guard <= pkg.classes.size(); ++guard) {
    if (c->superclass && std::holds_alternative<ExternalClass>(*c->superclass)) return true;
    c = InternalSuper(pkg, *c);
  }
  return false;
}

std::vector<MethodSelector>& Table(JcaClass& cls, bool public_table) {
  return public_table ? cls.public_method_table : cls.package_method_table;
}
const std::vector<MethodSelector>& Table(const JcaClass& cls, bool public_table) {
  return public_table ? cls.public_method_table : cls.package_method_table;
}
uint8_t& Base(JcaClass& cls, bool public_table) {
  return public_table ? cls.public_method_table_base : cls.package_method_table_base;
}
uint8_t Base(const JcaClass& cls, bool public_table) {
  return public_table ? cls.public_method_table_base : cls.package_method_table_base;
}

// Selector at `token` as seen from `cls`, walking internal superclasses.
std::optional<MethodSelector> SelectorAtToken(const JcaPackage& pkg, const JcaClass* cls,
                                              int token, bool public_table) {
  for (size_t guard = 0; cls && guard <= pkg.classes.size(); ++guard) {
    const auto& table = Table(*cls, public_table);
    int base = Base(*cls, public_table);
    if (!table.empty() && token >= base && token < base + static_cast<int>(table.size())) {
      return table[static_cast<size_t>(token - base)];
    }
    cls = InternalSuper(pkg, *cls);
  }
  return std::nullopt;
}

std::optional<uint8_t> InheritedToken(const JcaPackage& pkg, const JcaClass& cls,
                                      const MethodSelector& sel, bool public_table) {
  const JcaClass* c = InternalSuper(pkg, cls);
  for (size_t guard = 0; c && guard <= pkg.classes.size(); ++guard) {
    for (const JcaMethod& m : c->methods) {
      if (InTable(m, public_table) && m.token && m.selector() == sel) return m.token;
    }
    const auto& table = Table(*c, public_table);
    for (size_t i = 0; i < table.size(); ++i) {
      if (table[i] == sel) return static_cast<uint8_t>(Base(*c, public_table) + i);
    }
    c = InternalSuper(pkg, *c);
  }
  return std::nullopt;
}

// First token past the table seen from `cls`; nullopt past an external class.
std::optional<int> TableEnd(const JcaPackage& pkg, const JcaClass* cls, bool public_table) {
  for (size_t guard = 0; cls && guard <= pkg.classes.size(); ++guard) {
    const auto& table = Table(*cls, public_table);
    if (!table.empty()) return Base(*cls, public_table) + static_cast<int>(table.size());
    if (cls->superclass && std::holds_alternative<ExternalClass>(*cls->superclass)) {
      return std::nullopt;
    }
    cls = InternalSuper(pkg, *cls);
  }
  return 0;
}

// Gives unset tokens the lowest free values in declaration order. Items for
// which `first` holds are numbered before the rest. `width` is the number of
// token values an item occupies.
template <typename T, typename Pred, typename First, typename Width>
void AssignSequential(std::vector<T>& items, Pred in_namespace, First first, Width width) {
  std::set<int> used;
  for (const T& item : items) {
    if (!in_namespace(item) || !item.token) continue;
    for (int w = 0; w < width(item); ++w) used.insert(*item.token + w);
  }
  int next = 0;
  for (bool pass : {true, false}) {
    for (T& item : items) {
      if (!in_namespace(item) || item.token || first(item) != pass) continue;
      auto fits = [&](int t) {
        for (int w = 0; w < width(item); ++w) {
          if (used.count(t + w)) return false;
        }
        return true;
      };
      while (!fits(next)) ++next;
      if (next + width(item) > 0x100) throw SemanticError("more than 256 tokens in one namespace");
      item.token = static_cast<uint8_t>(next);
      for (int w = 0; w < width(item); ++w) used.insert(next + w);
    }
  }
}

template <typename T, typename Pred>
void AssignSequential(std::vector<T>& items, Pred in_namespace) {
  AssignSequential(items, in_namespace, [](const T&) { return true; }, [](const T&) { return 1; });
}

void AssignVirtualTokens(JcaPackage& pkg, JcaClass& cls, bool public_table) {
  auto& table = Table(cls, public_table);
  for (JcaMethod& m : cls.methods) {
    if (!InTable(m, public_table) || m.token) continue;
    auto it = std::find(table.begin(), table.end(), m.selector());
    if (it != table.end()) {
      m.token = static_cast<uint8_t>(Base(cls, public_table) + (it - table.begin()));
    }
  }
  if (!table.empty()) return;

  bool any = false;
  for (const JcaMethod& m : cls.methods) any |= InTable(m, public_table);
  if (!any) return;

  const JcaClass* super = InternalSuper(pkg, cls);
  std::optional<int> known_end = cls.superclass ? TableEnd(pkg, super, public_table) : 0;
  if (cls.superclass && std::holds_alternative<ExternalClass>(*cls.superclass)) known_end.reset();
  const bool has_end = known_end.has_value();
  int end = known_end.value_or(0);
  for (JcaMethod& m : cls.methods) {
    if (!InTable(m, public_table) || m.token) continue;
    if (auto inherited = InheritedToken(pkg, cls, m.selector(), public_table)) {
      m.token = inherited;
    } else if (has_end) {
      if (end > 0xFF) throw SemanticError("class " + cls.name + ": method tokens exhausted");
      m.token = static_cast<uint8_t>(end++);
    } else {
      throw SemanticError("class " + cls.name + ": method " + m.name +
                          " needs an explicit token or method table (external superclass)");
    }
  }

  int lo = 0x100, hi = -1;
  for (const JcaMethod& m : cls.methods) {
    if (!InTable(m, public_table)) continue;
    lo = std::min<int>(lo, *m.token);
    hi = std::max<int>(hi, *m.token);
  }
  Base(cls, public_table) = static_cast<uint8_t>(lo);
  for (int t = lo; t <= hi; ++t) {
    const JcaMethod* own = nullptr;
    for (const JcaMethod& m : cls.methods) {
      if (InTable(m, public_table) && *m.token == t) own = &m;
    }
    if (own) {
      table.push_back(own->selector());
    } else if (auto sel = SelectorAtToken(pkg, super, t, public_table)) {
      table.push_back(*sel);
    } else {
      throw SemanticError("class " + cls.name + ": cannot derive method table entry for token " +
                          std::to_string(t));
    }
  }
}

}  // namespace

bool IsVirtual(const JcaMethod& method) {
  return !method.is_static && !method.is_constructor() && method.access != Access::kPrivate;
}

bool IsAllocatedStatic(const JcaField& field) {
  if (!field.is_static) return false;
  bool constant = field.is_final && !field.type.is_reference_like() && field.initializer;
  return !constant;
}

void AssignDefaultTokens(JcaPackage& pkg) {
  // Public classes first so exported class tokens are dense.
  AssignSequential(
      pkg.classes, [](const JcaClass&) { return true; },
      [](const JcaClass& c) { return c.access == Access::kPublic; }, [](const JcaClass&) { return 1; });
  for (JcaClass& cls : pkg.classes) {
    auto one = [](const auto&) { return 1; };
    auto exported = [](const auto& member) {
      return member.access == Access::kPublic || member.access == Access::kProtected;
    };
    AssignSequential(
        cls.fields, [](const JcaField& f) { return f.is_static; },
        [&](const JcaField& f) { return exported(f) && IsAllocatedStatic(f); }, one);
    // Instance fields: references first, ints take two tokens.
    AssignSequential(
        cls.fields, [](const JcaField& f) { return !f.is_static; },
        [](const JcaField& f) { return f.type.is_reference_like(); },
        [](const JcaField& f) { return f.type.Words(); });
    if (cls.is_interface) {
      AssignSequential(cls.methods, [](const JcaMethod&) { return true; });
    } else {
      AssignSequential(
          cls.methods, [](const JcaMethod& m) { return !IsVirtual(m); }, exported, one);
    }
  }

  // Virtual tokens depend on superclasses, so visit supers first.
  std::set<std::string> done, visiting;
  std::function<void(JcaClass&)> visit = [&](JcaClass& cls) {
    if (done.count(cls.name) || visiting.count(cls.name)) return;
    visiting.insert(cls.name);
    if (cls.superclass) {
      if (const auto* name = std::get_if<std::string>(&*cls.superclass)) {
        for (JcaClass& other : pkg.classes) {
          if (other.name == *name) visit(other);
        }
      }
    }
    if (!cls.is_interface) {
      AssignVirtualTokens(pkg, cls, true);
      AssignVirtualTokens(pkg, cls, false);
    }
    visiting.erase(cls.name);
    done.insert(cls.name);
  };
  for (JcaClass& cls : pkg.classes) visit(cls);
}

namespace {

class Validator {
 public:
  explicit Validator(const JcaPackage& pkg) : pkg_(pkg) {}

  void Run() {
    where_ = "package " + pkg_.name;
    if (pkg_.name.empty()) Fail("empty package name");
    CheckAid(pkg_.aid, "package AID");
    std::set<Bytes> import_aids;
    for (size_t i = 0; i < pkg_.imports.size(); ++i) {
      const ImportEntry& imp = pkg_.imports[i];
      CheckAid(imp.aid, "import AID");
      if (!import_aids.insert(imp.aid).second) Fail("duplicate import AID " + ToHex(imp.aid));
      if (imp.local_token != i) Fail("import token out of sequence");
      if (imp.aid == pkg_.aid) Fail("package imports itself");
    }
    if (pkg_.imports.size() > 128) Fail("more than 128 imports");

    std::set<std::string> names;
    std::set<int> tokens;
    for (const JcaClass& cls : pkg_.classes) {
      if (!names.insert(cls.name).second) Fail("duplicate class " + cls.name);
      if (!cls.token) Fail("class " + cls.name + " has no token");
      if (!tokens.insert(*cls.token).second) Fail("duplicate class token for " + cls.name);
    }
    for (const CpEntry& e : pkg_.constant_pool) {
      where_ = "package " + pkg_.name + ": constant pool entry " + std::to_string(cp_index_++);
      CheckCpEntry(e);
    }
    for (const JcaClass& cls : pkg_.classes) {
      where_ = "package " + pkg_.name + ": class " + cls.name;
      CheckClass(cls);
    }
    std::set<Bytes> applet_aids;
    for (const AppletDecl& applet : pkg_.applets) {
      where_ = "package " + pkg_.name + ": applet " + applet.class_name;
      CheckAid(applet.aid, "applet AID");
      if (!applet_aids.insert(applet.aid).second) Fail("duplicate applet AID");
      const JcaClass* cls = pkg_.FindClass(applet.class_name);
      if (!cls) Fail("applet class " + applet.class_name + " is not declared");
      if (cls->is_interface || cls->is_abstract) Fail("applet class must be concrete");
      std::vector<Type> install_params = {Type::Primitive(Type::Kind::kByte, true),
                                          Type::Primitive(Type::Kind::kShort),
                                          Type::Primitive(Type::Kind::kByte)};
      const JcaMethod* install = cls->FindMethod("install", install_params);
      if (!install || !install->is_static || !install->has_body) {
        Fail("applet class lacks static install(byte[], short, byte)");
      }
    }
  }

 private:
  [[noreturn]] void Fail(const std::string& what) const {
    throw SemanticError(where_ + ": " + what);
  }

  void CheckAid(const Bytes& aid, const char* what) const {
    if (aid.size() < 5 || aid.size() > 16) {
      Fail(std::string(what) + " must be 5..16 bytes, got " + std::to_string(aid.size()));
    }
  }

  void CheckImportToken(uint8_t token) const {
    if (token >= pkg_.imports.size()) {
      Fail("package token " + std::to_string(token) + " does not name an import");
    }
  }

  const JcaClass* CheckClassTarget(const ClassTarget& target) const {
    if (const auto* ext = std::get_if<ExternalClass>(&target)) {
      CheckImportToken(ext->package_token);
      return nullptr;
    }
    const auto& name = std::get<std::string>(target);
    const JcaClass* cls = pkg_.FindClass(name);
    if (!cls) Fail("unknown class " + name);
    return cls;
  }

  void CheckType(const Type& type) const {
    if (type.kind == Type::Kind::kReference) CheckClassTarget(type.reference);
  }

  const JcaField* FindFieldInChain(const JcaClass* cls, const std::string& name) const {
    for (size_t guard = 0; cls && guard <= pkg_.classes.size(); ++guard) {
      if (const JcaField* f = cls->FindField(name)) return f;
      cls = InternalSuper(pkg_, *cls);
    }
    return nullptr;
  }

  const JcaMethod* FindMethodInChain(const JcaClass* cls, const MethodSelector& sel) const {
    for (size_t guard = 0; cls && guard <= pkg_.classes.size(); ++guard) {
      if (const JcaMethod* m = cls->FindMethod(sel.name, sel.params)) return m;
      cls = InternalSuper(pkg_, *cls);
    }
    return nullptr;
  }

  void CheckCpEntry(const CpEntry& e) const {
    if (e.kind == CpKind::kClassRef) {
      CheckClassTarget(e.class_target);
      return;
    }
    if (IsFieldRef(e.kind)) {
      CheckType(e.field_type);
    } else {
      CheckType(e.return_type);
      for (const Type& t : e.params) CheckType(t);
    }
    if (const auto* ext = std::get_if<ExternalMember>(&e.member)) {
      CheckImportToken(ext->package_token);
      return;
    }
    const auto& member = std::get<InternalMember>(e.member);
    const JcaClass* cls = pkg_.FindClass(member.class_name);
    if (!cls) Fail("unknown class " + member.class_name);
    if (IsFieldRef(e.kind)) {
      const JcaField* f = FindFieldInChain(cls, member.member_name);
      if (!f) Fail("unknown field " + member.class_name + "." + member.member_name);
      if (f->is_static != (e.kind == CpKind::kStaticFieldRef)) Fail("field kind mismatch");
      if (f->type != e.field_type) Fail("field type mismatch");
      return;
    }
    MethodSelector sel{member.member_name, e.params};
    const JcaMethod* m = e.kind == CpKind::kStaticMethodRef
                             ? cls->FindMethod(sel.name, sel.params)
                             : FindMethodInChain(cls, sel);
    if (!m) {
      if (e.kind != CpKind::kStaticMethodRef && HasExternalAncestor(pkg_, *cls)) {
        Fail("inherited method " + member.member_name + " must be referenced by tokens");
      }
      Fail("unknown method " + member.class_name + "." + member.member_name);
    }
    if (e.kind == CpKind::kStaticMethodRef && IsVirtual(*m)) Fail("static ref to virtual method");
    if (e.kind != CpKind::kStaticMethodRef && !IsVirtual(*m)) Fail("virtual ref to static method");
    if (cls->is_interface) Fail("interface methods are invoked through invokeinterface");
    if (m->return_type != e.return_type) Fail("return type mismatch");
  }

  void CheckInitializer(const JcaField& f) const {
    const FieldInitializer& init = *f.initializer;
    if (!f.is_static) Fail("field " + f.name + ": only static fields take initializers");
    if (f.type.kind == Type::Kind::kReference) Fail("field " + f.name + ": reference initializer");
    if (init.array != f.type.array) Fail("field " + f.name + ": initializer shape mismatch");
    if (init.array && init.values.size() > 0x7FFF) Fail("field " + f.name + ": array too long");
    int64_t lo = 0, hi = 0;
    switch (f.type.kind) {
      case Type::Kind::kBoolean:
        lo = 0, hi = 1;
        break;
      case Type::Kind::kByte:
        lo = -128, hi = 255;
        break;
      case Type::Kind::kShort:
        lo = -32768, hi = 65535;
        break;
      default:
        lo = -2147483648LL, hi = 4294967295LL;
        break;
    }
    for (int64_t v : init.values) {
      if (v < lo || v > hi) Fail("field " + f.name + ": value " + std::to_string(v) + " out of range");
    }
  }

  void CheckClass(const JcaClass& cls) const {
    if (cls.is_final && cls.is_abstract) Fail("class is both final and abstract");
    if (cls.is_interface) {
      if (cls.is_final) Fail("interface cannot be final");
      if (!cls.fields.empty()) Fail("interface fields are not supported");
      if (!cls.public_method_table.empty() || !cls.package_method_table.empty() ||
          !cls.interface_impls.empty()) {
        Fail("interface cannot carry method tables");
      }
      for (const ClassTarget& t : cls.superinterfaces) {
        const JcaClass* s = CheckClassTarget(t);
        if (s && !s->is_interface) Fail("superinterface is a class");
      }
    } else {
      if (cls.is_shareable || cls.is_remote) Fail("shareable/remote apply to interfaces only");
      if (cls.superclass) {
        const JcaClass* s = CheckClassTarget(*cls.superclass);
        if (s && s->is_interface) Fail("superclass is an interface");
        if (s && s->is_final) Fail("superclass is final");
      }
      const JcaClass* c = &cls;
      for (size_t steps = 0; c; ++steps) {
        if (steps > pkg_.classes.size()) Fail("cyclic inheritance");
        c = InternalSuper(pkg_, *c);
      }
    }
    for (const auto* list : {&cls.shareable_interfaces, &cls.remote_interfaces}) {
      for (const ClassTarget& t : *list) {
        const JcaClass* s = CheckClassTarget(t);
        if (s && !s->is_interface) Fail("interface list names a class");
      }
    }

    std::set<std::string> field_names;
    std::set<int> static_tokens, instance_tokens;
    for (const JcaField& f : cls.fields) {
      if (!field_names.insert(f.name).second) Fail("duplicate field " + f.name);
      CheckType(f.type);
      if (!f.token) Fail("field " + f.name + " has no token");
      auto& used = f.is_static ? static_tokens : instance_tokens;
      int width = f.is_static ? 1 : f.type.Words();
      for (int w = 0; w < width; ++w) {
        if (!used.insert(*f.token + w).second) Fail("overlapping token for field " + f.name);
      }
      if (f.is_transient && !f.is_static) Fail("field " + f.name + ": transient is static-only");
      if (f.initializer) CheckInitializer(f);
    }

    std::set<std::pair<std::string, std::string>> selectors;
    std::set<int> public_tokens, package_tokens, static_method_tokens;
    for (const JcaMethod& m : cls.methods) {
      std::string sig;
      for (const Type& t : m.params) sig += TypeText(t) + ",";
      if (!selectors.insert({m.name, sig}).second) Fail("duplicate method " + m.name);
      CheckMethod(cls, m);
      std::set<int>* ns = cls.is_interface        ? &public_tokens
                          : !IsVirtual(m)         ? &static_method_tokens
                          : IsPublicVisible(m)    ? &public_tokens
                                                  : &package_tokens;
      if (!ns->insert(*m.token).second) Fail("duplicate token for method " + m.name);
    }
    if (!cls.is_interface) {
      CheckTable(cls, true);
      CheckTable(cls, false);
      for (const InterfaceImpl& impl : cls.interface_impls) {
        const JcaClass* iface = CheckClassTarget(impl.interface);
        if (!iface) continue;
        if (!iface->is_interface) Fail("implemented type " + iface->name + " is not an interface");
        if (impl.method_tokens.size() != iface->methods.size()) {
          Fail("interface " + iface->name + " expects " + std::to_string(iface->methods.size()) +
               " method tokens");
        }
        for (uint8_t t : impl.method_tokens) {
          bool own = false;
          for (const JcaMethod& m : cls.methods) own |= InTable(m, true) && *m.token == t;
          if (!own && !SelectorAtToken(pkg_, &cls, t, true) && !HasExternalAncestor(pkg_, cls)) {
            Fail("interface method token " + std::to_string(t) + " is not implemented");
          }
        }
      }
    }
  }

  void CheckTable(const JcaClass& cls, bool public_table) const {
    const auto& table = Table(cls, public_table);
    int base = Base(cls, public_table);
    if (base + table.size() > 0x100) Fail("method table exceeds 256 tokens");
    for (const JcaMethod& m : cls.methods) {
      if (!InTable(m, public_table)) continue;
      int idx = *m.token - base;
      if (idx < 0 || idx >= static_cast<int>(table.size()) ||
          !(table[static_cast<size_t>(idx)] == m.selector())) {
        Fail("method " + m.name + " token " + std::to_string(*m.token) +
             " disagrees with its method table");
      }
    }
    for (const MethodSelector& sel : table) {
      const JcaMethod* own = cls.FindMethod(sel.name, sel.params);
      if (own) {
        if (!InTable(*own, public_table)) Fail("method table lists " + sel.name + " of wrong kind");
        continue;
      }
      if (InheritedToken(pkg_, cls, sel, public_table)) continue;
      if (HasExternalAncestor(pkg_, cls)) continue;
      Fail("method table entry " + sel.name + " is neither declared nor inherited");
    }
  }

  void CheckMethod(const JcaClass& cls, const JcaMethod& m) const {
    std::string ctx = "method " + m.name + ": ";
    if (!m.token) Fail(ctx + "no token");
    if (!m.name.empty() && m.name[0] == '<' && m.name != "<init>") Fail(ctx + "unsupported name");
    if (m.is_constructor() && (m.is_static || !m.return_type.is_void())) {
      Fail(ctx + "constructor must be an instance method returning void");
    }
    CheckType(m.return_type);
    for (const Type& t : m.params) CheckType(t);
    if (m.param_names.size() != m.params.size()) Fail(ctx + "parameter names out of step");
    if (cls.is_interface) {
      if (!m.is_abstract || m.is_static || m.access != Access::kPublic) {
        Fail(ctx + "interface methods must be public abstract");
      }
    }
    if (m.is_abstract) {
      if (m.is_static || m.is_final || m.is_native || m.access == Access::kPrivate) {
        Fail(ctx + "abstract conflicts with static/final/native/private");
      }
      if (!cls.is_abstract && !cls.is_interface) Fail(ctx + "abstract method in concrete class");
    }
    if (m.Nargs() > 0xFF) Fail(ctx + "too many argument words");
    if (m.is_native || m.is_abstract) {
      if (m.has_body) Fail(ctx + (m.is_native ? "native" : "abstract") + " method has a body");
      return;
    }
    if (!m.has_body) Fail(ctx + "missing body");
    if (!m.max_stack || !m.max_locals) Fail(ctx + "missing .stack or .locals");
    if (m.declared_nargs && *m.declared_nargs != m.Nargs()) {
      Fail(ctx + ".args " + std::to_string(*m.declared_nargs) + " but signature needs " +
           std::to_string(m.Nargs()));
    }
    if (m.body.empty()) Fail(ctx + "empty body");
    CheckBody(m, ctx);
  }

  void CheckCpOperand(int64_t index, const std::string& mnemonic, const std::string& ctx) const {
    if (index < 0 || index >= static_cast<int64_t>(pkg_.constant_pool.size())) {
      Fail(ctx + mnemonic + ": constant pool index " + std::to_string(index) + " out of range");
    }
    CpKind kind = pkg_.constant_pool[static_cast<size_t>(index)].kind;
    auto starts = [&](std::string_view p) { return mnemonic.rfind(p, 0) == 0; };
    std::vector<CpKind> allowed;
    if (starts("getstatic") || starts("putstatic")) {
      allowed = {CpKind::kStaticFieldRef};
    } else if (starts("getfield") || starts("putfield")) {
      allowed = {CpKind::kInstanceFieldRef};
    } else if (mnemonic == "invokevirtual") {
      allowed = {CpKind::kVirtualMethodRef};
    } else if (mnemonic == "invokespecial") {
      allowed = {CpKind::kStaticMethodRef, CpKind::kSuperMethodRef};
    } else if (mnemonic == "invokestatic") {
      allowed = {CpKind::kStaticMethodRef};
    } else {
      allowed = {CpKind::kClassRef};
    }
    if (std::find(allowed.begin(), allowed.end(), kind) == allowed.end()) {
      Fail(ctx + mnemonic + ": constant pool entry " + std::to_string(index) + " is a " +
           CpKindKeyword(kind));
    }
  }

  void CheckBody(const JcaMethod& m, const std::string& ctx) const {
    std::set<std::string> labels;
    auto define = [&](const std::string& l) {
      if (!labels.insert(l).second) Fail(ctx + "duplicate label " + l);
    };
    for (const Instruction& ins : m.body) {
      for (const std::string& l : ins.labels) define(l);
    }
    for (const std::string& l : m.trailing_labels) define(l);
    auto need_label = [&](const Operand& op, const std::string& mnemonic) {
      if (op.kind != Operand::Kind::kLabel) Fail(ctx + mnemonic + ": expected a label operand");
      if (!labels.count(op.label)) Fail(ctx + mnemonic + ": undefined label " + op.label);
    };
    auto need_imm = [&](const Operand& op, const std::string& mnemonic) {
      if (op.kind != Operand::Kind::kImmediate) {
        Fail(ctx + mnemonic + ": expected an immediate, found " + op.label);
      }
    };

    for (const Instruction& ins : m.body) {
      const OpcodeInfo* info = FindOpcode(ins.mnemonic);
      if (!info) Fail(ctx + "unknown mnemonic " + ins.mnemonic);
      if (info->is_switch()) {
        std::vector<int64_t> leading;
        for (size_t i = 1; i < ins.operands.size() && i < 3; ++i) {
          if (ins.operands[i].kind == Operand::Kind::kImmediate) {
            leading.push_back(ins.operands[i].value);
          }
        }
        auto expected = ExpectedOperandCount(*info, leading);
        if (!expected || *expected != ins.operands.size()) {
          Fail(ctx + ins.mnemonic + ": operand count does not match its bounds");
        }
        need_label(ins.operands[0], ins.mnemonic);
        bool table = info->operands[0] == OperandKind::kSTableSwitch ||
                     info->operands[0] == OperandKind::kITableSwitch;
        for (size_t i = 1; i < ins.operands.size(); ++i) {
          bool is_label = table ? i >= 3 : (i >= 3 && (i - 3) % 2 == 0);
          if (is_label) {
            need_label(ins.operands[i], ins.mnemonic);
          } else {
            need_imm(ins.operands[i], ins.mnemonic);
          }
        }
        continue;
      }
      if (ins.operands.size() != info->operands.size()) {
        Fail(ctx + ins.mnemonic + " takes " + std::to_string(info->operands.size()) +
             " operands, got " + std::to_string(ins.operands.size()));
      }
      for (size_t i = 0; i < ins.operands.size(); ++i) {
        const Operand& op = ins.operands[i];
        switch (info->operands[i]) {
          case OperandKind::kBr1:
          case OperandKind::kBr2:
            need_label(op, ins.mnemonic);
            break;
          case OperandKind::kCp1:
          case OperandKind::kCp2: {
            need_imm(op, ins.mnemonic);
            bool after_atype = i > 0 && info->operands[i - 1] == OperandKind::kAtype;
            if (after_atype && !CpIndexFollowsAtype(ins.operands[i - 1].value)) break;
            CheckCpOperand(op.value, ins.mnemonic, ctx);
            break;
          }
          case OperandKind::kAtype:
            need_imm(op, ins.mnemonic);
            if (info->operands.size() == 1 ? (op.value < 10 || op.value > 13)
                                           : !(op.value == 0 || (op.value >= 10 && op.value <= 14))) {
              Fail(ctx + ins.mnemonic + ": bad array type " + std::to_string(op.value));
            }
            break;
          default:
            need_imm(op, ins.mnemonic);
            break;
        }
      }
    }

    std::map<std::string, size_t> position;
    for (size_t i = 0; i < m.body.size(); ++i) {
      for (const std::string& l : m.body[i].labels) position[l] = i;
    }
    for (const std::string& l : m.trailing_labels) position[l] = m.body.size();
    for (const ExceptionHandler& h : m.handlers) {
      for (const std::string* l : {&h.start_label, &h.end_label, &h.handler_label}) {
        if (!position.count(*l)) Fail(ctx + "exception table names undefined label " + *l);
      }
      if (position[h.start_label] >= position[h.end_label]) Fail(ctx + "empty exception range");
      if (position[h.handler_label] >= m.body.size()) Fail(ctx + "handler past end of body");
      if (h.catch_type != 0) {
        if (h.catch_type >= pkg_.constant_pool.size() ||
            pkg_.constant_pool[h.catch_type].kind != CpKind::kClassRef) {
          Fail(ctx + "catch type " + std::to_string(h.catch_type) + " is not a classRef");
        }
      }
    }
  }

  const JcaPackage& pkg_;
  std::string where_;
  mutable size_t cp_index_ = 0;
};

}  // namespace

bool CpIndexFollowsAtype(int64_t atype) { return atype == 0 || atype == 14; }

void ValidatePackage(const JcaPackage& pkg) { Validator(pkg).Run(); }

}  // namespace jcimage::jca
