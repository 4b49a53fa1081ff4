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

#include "jcimage/cap/builder.h"

#include <algorithm>
#include <functional>
#include <set>

#include "jcimage/cap/assembler.h"
#include "jcimage/jca/opcodes.h"
#include "jcimage/jca/parser.h"

namespace jcimage::cap {

using jca::Access;
using jca::ClassTarget;
using jca::CpEntry;
using jca::CpKind;
using jca::ExternalClass;
using jca::ExternalMember;
using jca::InternalMember;
using jca::JcaClass;
using jca::JcaField;
using jca::JcaMethod;
using jca::JcaPackage;
using jca::Type;

namespace {

constexpr uint8_t kAccInt = 0x01;
constexpr uint8_t kAccExport = 0x02;
constexpr uint8_t kAccApplet = 0x04;

constexpr uint8_t kMethodExtended = 0x8;
constexpr uint8_t kMethodAbstract = 0x4;

constexpr uint8_t kClassInterface = 0x8;
constexpr uint8_t kClassShareable = 0x4;
constexpr uint8_t kClassRemote = 0x2;

constexpr uint16_t kNoClass = 0xFFFF;

int PrimitiveSize(Type::Kind kind) {
  switch (kind) {
    case Type::Kind::kShort:
      return 2;
    case Type::Kind::kInt:
      return 4;
    default:
      return 1;
  }
}

uint8_t ArrayInitType(Type::Kind kind) {
  switch (kind) {
    case Type::Kind::kBoolean:
      return 2;
    case Type::Kind::kByte:
      return 3;
    case Type::Kind::kShort:
      return 4;
    default:
      return 5;
  }
}

// Type nibbles shared by descriptor type strings and field primitive codes.
uint8_t PrimitiveNibble(Type::Kind kind) {
  switch (kind) {
    case Type::Kind::kVoid:
      return 0x1;
    case Type::Kind::kBoolean:
      return 0x2;
    case Type::Kind::kByte:
      return 0x3;
    case Type::Kind::kShort:
      return 0x4;
    case Type::Kind::kInt:
      return 0x5;
    case Type::Kind::kReference:
      return 0x6;
  }
  return 0;
}

bool IsPublicVisible(Access a) { return a == Access::kPublic || a == Access::kProtected; }

bool IsExportedStaticMethod(const JcaMethod& m) {
  return !jca::IsVirtual(m) && m.access != Access::kPrivate && IsPublicVisible(m.access);
}

bool UsesIntType(const Type& t) { return t.kind == Type::Kind::kInt; }

bool UsesInt(const JcaPackage& pkg) {
  for (const CpEntry& e : pkg.constant_pool) {
    if (UsesIntType(e.field_type) || UsesIntType(e.return_type)) return true;
    for (const Type& t : e.params) {
      if (UsesIntType(t)) return true;
    }
  }
  for (const JcaClass& cls : pkg.classes) {
    for (const JcaField& f : cls.fields) {
      if (UsesIntType(f.type)) return true;
    }
    for (const JcaMethod& m : cls.methods) {
      if (UsesIntType(m.return_type)) return true;
      for (const Type& t : m.params) {
        if (UsesIntType(t)) return true;
      }
      for (const jca::Instruction& ins : m.body) {
        const std::string& n = ins.mnemonic;
        bool int_op = (n[0] == 'i' && n.rfind("if", 0) != 0 && n.rfind("invoke", 0) != 0 &&
                       n != "instanceof") ||
                      n == "s2i" || n == "b2i" || n.find("_i") != std::string::npos;
        if (int_op) return true;
      }
    }
  }
  return false;
}

class Builder {
 public:
  Builder(const JcaPackage& pkg, const jca::NativeMethodTable& natives, const BuildOptions& opts)
      : pkg_(pkg), natives_(natives), opts_(opts) {}

  CapFile Run() {
    cap_.package_name = pkg_.name;
    cap_.package_aid = pkg_.aid;
    cap_.package_version = pkg_.version;
    OrderClasses();

    BuildStaticField();
    BuildImport();
    BuildMethod();
    LayoutClass();
    BuildConstantPool();
    BuildClass();
    BuildExport();
    BuildDescriptor();
    BuildReferenceLocation();
    BuildApplet();
    BuildHeader();
    BuildDirectory();
    return std::move(cap_);
  }

 private:
  void Put(ComponentKind kind, Bytes info) {
    if (info.size() > 0xFFFF) {
      throw BuildError(ComponentName(kind), "component exceeds 65535 bytes");
    }
    cap_.components[kind] = ComponentBinary{kind, std::move(info)};
  }

  void Require(ComponentKind kind, ComponentKind dependency) const {
    if (!cap_.Has(dependency)) {
      throw BuildError(ComponentName(kind),
                       std::string("depends on ") + ComponentName(dependency) + ", not built");
    }
  }

  // Interfaces first, then classes with superclasses ahead of subclasses.
  void OrderClasses() {
    for (const JcaClass& c : pkg_.classes) {
      if (c.is_interface) order_.push_back(&c);
    }
    std::set<std::string> placed;
    std::function<void(const JcaClass&)> place = [&](const JcaClass& c) {
      if (placed.count(c.name)) return;
      placed.insert(c.name);
      if (c.superclass) {
        if (const auto* name = std::get_if<std::string>(&*c.superclass)) {
          if (const JcaClass* s = pkg_.FindClass(*name)) place(*s);
        }
      }
      order_.push_back(&c);
    };
    for (const JcaClass& c : pkg_.classes) {
      if (!c.is_interface) place(c);
    }
  }

  // ---- StaticField

  void BuildStaticField() {
    slots_ = LayoutStaticFields(pkg_);
    ByteWriter w;
    std::vector<const StaticFieldSlot*> seg1, seg2, seg3, seg4;
    for (const StaticFieldSlot& s : slots_) {
      const JcaField& f = *s.field;
      if (f.type.is_reference_like()) {
        (f.initializer ? seg1 : seg2).push_back(&s);
      } else {
        (s.non_default ? seg4 : seg3).push_back(&s);
      }
      static_offsets_[s.class_name + "." + f.name] = s.offset;
    }
    uint32_t image_size = 2 * static_cast<uint32_t>(seg1.size() + seg2.size());
    uint32_t default_bytes = 0, non_default_bytes = 0;
    for (const auto* s : seg3) default_bytes += PrimitiveSize(s->field->type.kind);
    for (const auto* s : seg4) non_default_bytes += PrimitiveSize(s->field->type.kind);
    image_size += default_bytes + non_default_bytes;
    if (image_size > 0xFFFF) throw BuildError("StaticField", "static image exceeds 65535 bytes");
    static_image_size_ = static_cast<uint16_t>(image_size);

    w.U2(image_size);
    w.U2(static_cast<uint32_t>(seg1.size() + seg2.size()));
    w.U2(static_cast<uint32_t>(seg1.size()));
    array_init_size_ = 0;
    for (const auto* s : seg1) {
      const JcaField& f = *s->field;
      Bytes values;
      for (int64_t v : f.initializer->values) {
        Bytes b = PrimitiveBytes(f.type.kind, v);
        values.insert(values.end(), b.begin(), b.end());
      }
      if (values.size() > 0xFFFF) throw BuildError("StaticField", "array initializer too long");
      w.U1(ArrayInitType(f.type.kind));
      w.U2(static_cast<uint32_t>(values.size()));
      w.Append(values);
      array_init_size_ += static_cast<uint32_t>(values.size());
    }
    array_init_count_ = static_cast<uint16_t>(seg1.size());
    w.U2(default_bytes);
    w.U2(non_default_bytes);
    for (const auto* s : seg4) {
      w.Append(PrimitiveBytes(s->field->type.kind, s->field->initializer->values.at(0)));
    }
    Put(ComponentKind::kStaticField, std::move(w).bytes());
  }

  // ---- Import

  void BuildImport() {
    ByteWriter w;
    w.U1(static_cast<uint32_t>(pkg_.imports.size()));
    for (const jca::ImportEntry& imp : pkg_.imports) {
      w.U1(imp.version.minor);
      w.U1(imp.version.major);
      w.U1(static_cast<uint32_t>(imp.aid.size()));
      w.Append(imp.aid);
    }
    Put(ComponentKind::kImport, std::move(w).bytes());
  }

  // ---- Method

  struct MethodLayout {
    uint16_t offset = 0;
    uint16_t bytecode_count = 0;
    uint16_t handler_index = 0;
    uint16_t handler_count = 0;
  };

  void BuildMethod() {
    Require(ComponentKind::kMethod, ComponentKind::kImport);
    struct Pending {
      const JcaClass* cls;
      const JcaMethod* method;
      std::vector<jca::Instruction> stub;
      AssembledCode code;
    };
    std::vector<Pending> pending;
    size_t handler_total = 0;
    for (const JcaClass& cls : pkg_.classes) {
      if (cls.is_interface) continue;
      for (const JcaMethod& m : cls.methods) {
        Pending p{&cls, &m, {}, {}};
        if (m.is_native) {
          auto index = natives_.IndexOf(pkg_.name, cls.name, m.name, m.params);
          if (!index) {
            throw BuildError("Method", "native " + cls.name + "." + m.name +
                                           " missing from the native method table");
          }
          p.stub = InjectNativeStub(m, *index);
          p.code = AssembleMethod(p.stub);
        } else if (!m.is_abstract) {
          p.code = AssembleMethod(m.body, m.trailing_labels);
        }
        handler_total += m.handlers.size();
        pending.push_back(std::move(p));
      }
    }
    if (handler_total > 0xFF) throw BuildError("Method", "more than 255 exception handlers");

    ByteWriter handlers;
    ByteWriter methods;
    const uint32_t base = 1 + 8 * static_cast<uint32_t>(handler_total);
    uint16_t handler_index = 0;
    for (Pending& p : pending) {
      const JcaMethod& m = *p.method;
      uint32_t offset = base + static_cast<uint32_t>(methods.size());
      int max_stack = 0, max_locals = 0, nargs = m.Nargs();
      uint8_t flags = 0;
      if (m.is_native) {
        max_stack = std::max(1, m.return_type.Words());
      } else if (m.is_abstract) {
        flags |= kMethodAbstract;
      } else {
        max_stack = *m.max_stack;
        max_locals = *m.max_locals;
      }
      bool extended = max_stack > 15 || max_locals > 15 || nargs > 15;
      if (extended) {
        methods.U1(static_cast<uint32_t>((flags | kMethodExtended) << 4));
        methods.U1(static_cast<uint32_t>(max_stack));
        methods.U1(static_cast<uint32_t>(nargs));
        methods.U1(static_cast<uint32_t>(max_locals));
      } else {
        methods.U1(static_cast<uint32_t>((flags << 4) | max_stack));
        methods.U1(static_cast<uint32_t>((nargs << 4) | max_locals));
      }
      uint32_t code_start = base + static_cast<uint32_t>(methods.size());
      methods.Append(p.code.bytes);
      uint32_t end = base + static_cast<uint32_t>(methods.size());
      if (end > 0xFFFF) throw BuildError("Method", "component exceeds 65535 bytes");

      for (const Relocation& r : p.code.relocations) {
        (r.width == 1 ? cap_.byte_index_operands : cap_.byte2_index_operands)
            .push_back(code_start + r.offset);
      }
      const auto& instrs = m.is_native ? p.stub : m.body;
      for (const jca::Instruction& ins : instrs) {
        if (ins.mnemonic == "impdep1" || ins.mnemonic == "impdep2") cap_.uses_impdep = true;
      }

      MethodLayout layout;
      layout.offset = static_cast<uint16_t>(offset);
      layout.bytecode_count = static_cast<uint16_t>(p.code.bytes.size());
      layout.handler_index = handler_index;
      layout.handler_count = static_cast<uint16_t>(m.handlers.size());
      for (size_t h = 0; h < m.handlers.size(); ++h) {
        const jca::ExceptionHandler& eh = m.handlers[h];
        auto label = [&](const std::string& l) -> uint32_t {
          auto it = p.code.labels.find(l);
          if (it == p.code.labels.end()) throw UnresolvedLabel(l);
          return it->second;
        };
        uint32_t start = label(eh.start_label), stop = label(eh.end_label);
        if (stop <= start || stop - start > 0x7FFF) {
          throw BuildError("Method", m.name + ": bad exception handler range");
        }
        bool last = h + 1 == m.handlers.size();
        handlers.U2(code_start + start);
        handlers.U2((last ? 0x8000u : 0u) | (stop - start));
        handlers.U2(code_start + label(eh.handler_label));
        handlers.U2(eh.catch_type);
        ++handler_index;
      }
      std::string key = MethodKey(p.cls->name, m.name, m.params);
      cap_.method_offsets[key] = layout.offset;
      method_layout_[key] = layout;
    }
    ByteWriter w;
    w.U1(static_cast<uint32_t>(handler_total));
    w.Append(handlers.bytes());
    w.Append(methods.bytes());
    Put(ComponentKind::kMethod, std::move(w).bytes());
  }

  uint16_t MethodOffset(const std::string& component, const std::string& class_name,
                        const std::string& name, const std::vector<Type>& params) const {
    auto it = cap_.method_offsets.find(MethodKey(class_name, name, params));
    if (it == cap_.method_offsets.end()) {
      throw BuildError(component, "depends on Method: no offset for " +
                                      MethodKey(class_name, name, params));
    }
    return it->second;
  }

  // ---- Class

  uint16_t ClassRef(const ClassTarget& target, const std::string& component) const {
    if (const auto* ext = std::get_if<ExternalClass>(&target)) {
      return static_cast<uint16_t>(((0x80u | ext->package_token) << 8) | ext->class_token);
    }
    const auto& name = std::get<std::string>(target);
    auto it = class_offsets_.find(name);
    if (it == class_offsets_.end()) {
      throw BuildError(component, "depends on Class: no offset for " + name);
    }
    return it->second;
  }

  // Offset of the method a table slot dispatches to, 0xFFFF when it lives in
  // another package.
  uint16_t VirtualSlot(const JcaClass& cls, const jca::MethodSelector& sel) const {
    const JcaClass* c = &cls;
    for (size_t guard = 0; c && guard <= pkg_.classes.size(); ++guard) {
      if (const JcaMethod* m = c->FindMethod(sel.name, sel.params)) {
        return MethodOffset("Class", c->name, m->name, m->params);
      }
      if (!c->superclass) break;
      const auto* name = std::get_if<std::string>(&*c->superclass);
      c = name ? pkg_.FindClass(*name) : nullptr;
    }
    return 0xFFFF;
  }

  Bytes EncodeClass(bool final_pass) {
    ByteWriter w;
    w.U2(0);  // signature pool length
    for (const JcaClass* cls : order_) {
      if (!final_pass) class_offsets_[cls->name] = static_cast<uint16_t>(w.size());
      if (cls->is_interface) {
        if (cls->superinterfaces.size() > 15) throw BuildError("Class", "too many superinterfaces");
        uint8_t flags = kClassInterface | (cls->is_shareable ? kClassShareable : 0) |
                        (cls->is_remote ? kClassRemote : 0);
        w.U1(static_cast<uint32_t>((flags << 4) | cls->superinterfaces.size()));
        for (const ClassTarget& t : cls->superinterfaces) w.U2(final_pass ? ClassRef(t, "Class") : 0);
        if (cls->is_remote) {
          w.U1(static_cast<uint32_t>(cls->name.size()));
          w.Append(ByteView(reinterpret_cast<const uint8_t*>(cls->name.data()), cls->name.size()));
        }
        continue;
      }
      if (cls->interface_impls.size() > 15) throw BuildError("Class", "too many interfaces");
      uint8_t flags = cls->shareable_interfaces.empty() ? 0 : kClassShareable;
      w.U1(static_cast<uint32_t>((flags << 4) | cls->interface_impls.size()));
      w.U2(cls->superclass && final_pass ? ClassRef(*cls->superclass, "Class") : kNoClass);

      int instance_words = 0, ref_count = 0, first_ref = 0x100, last_ref = -1;
      for (const JcaField& f : cls->fields) {
        if (f.is_static) continue;
        instance_words += f.type.Words();
        if (f.type.is_reference_like()) {
          ++ref_count;
          first_ref = std::min<int>(first_ref, *f.token);
          last_ref = std::max<int>(last_ref, *f.token);
        }
      }
      if (instance_words > 0xFF) throw BuildError("Class", cls->name + ": instance too large");
      if (ref_count && last_ref - first_ref + 1 != ref_count) {
        throw BuildError("Class", cls->name + ": reference field tokens are not contiguous");
      }
      w.U1(static_cast<uint32_t>(instance_words));
      w.U1(ref_count ? static_cast<uint32_t>(first_ref) : 0xFFu);
      w.U1(static_cast<uint32_t>(ref_count));
      w.U1(cls->public_method_table_base);
      w.U1(static_cast<uint32_t>(cls->public_method_table.size()));
      w.U1(cls->package_method_table_base);
      w.U1(static_cast<uint32_t>(cls->package_method_table.size()));
      for (const auto& sel : cls->public_method_table) w.U2(final_pass ? VirtualSlot(*cls, sel) : 0);
      for (const auto& sel : cls->package_method_table) w.U2(final_pass ? VirtualSlot(*cls, sel) : 0);
      for (const jca::InterfaceImpl& impl : cls->interface_impls) {
        w.U2(final_pass ? ClassRef(impl.interface, "Class") : 0);
        w.U1(static_cast<uint32_t>(impl.method_tokens.size()));
        for (uint8_t t : impl.method_tokens) w.U1(t);
      }
    }
    return std::move(w).bytes();
  }

  void LayoutClass() { EncodeClass(false); }

  void BuildClass() {
    Require(ComponentKind::kClass, ComponentKind::kMethod);
    Bytes info = EncodeClass(true);
    Put(ComponentKind::kClass, std::move(info));
  }

  // ---- ConstantPool

  const JcaClass* CorpusClass(uint8_t package_token, uint8_t class_token, size_t index) const {
    const jca::ImportEntry& imp = pkg_.imports.at(package_token);
    auto it = opts_.corpus.find(imp.aid);
    if (it == opts_.corpus.end()) return nullptr;
    const JcaPackage& other = *it->second;
    std::string where = "entry " + std::to_string(index) + " depends on Import " +
                        std::to_string(package_token) + " (" + other.name + ")";
    if (other.version.major != imp.version.major || other.version.minor < imp.version.minor) {
      throw BuildError("ConstantPool", where + ": version mismatch");
    }
    for (const JcaClass& c : other.classes) {
      if (c.token == class_token) {
        if (c.access != Access::kPublic) throw BuildError("ConstantPool", where + ": class not public");
        return &c;
      }
    }
    throw BuildError("ConstantPool", where + ": no class token " + std::to_string(class_token));
  }

  // Class references are import-relative, so types from two packages are
  // compared through (package AID, class token).
  static std::pair<Bytes, int> GlobalClass(const JcaPackage& pkg, const ClassTarget& target) {
    if (const auto* ext = std::get_if<ExternalClass>(&target)) {
      if (ext->package_token >= pkg.imports.size()) return {{}, -1};
      return {pkg.imports[ext->package_token].aid, ext->class_token};
    }
    const JcaClass* c = pkg.FindClass(std::get<std::string>(target));
    return {pkg.aid, c && c->token ? *c->token : -1};
  }

  bool SameTypes(const std::vector<Type>& ours, const JcaPackage& other,
                 const std::vector<Type>& theirs) const {
    if (ours.size() != theirs.size()) return false;
    for (size_t i = 0; i < ours.size(); ++i) {
      const Type& a = ours[i];
      const Type& b = theirs[i];
      if (a.kind != b.kind || a.array != b.array) return false;
      if (a.kind == Type::Kind::kReference &&
          GlobalClass(pkg_, a.reference) != GlobalClass(other, b.reference)) {
        return false;
      }
    }
    return true;
  }

  void CheckExternalMember(const CpEntry& e, const ExternalMember& ext, size_t index) const {
    const JcaClass* c = CorpusClass(ext.package_token, ext.class_token, index);
    if (!c) return;
    const JcaPackage& other = *opts_.corpus.at(pkg_.imports[ext.package_token].aid);
    auto fail = [&] {
      throw BuildError("ConstantPool", "entry " + std::to_string(index) + " depends on Import " +
                                           std::to_string(ext.package_token) + ": " + c->name +
                                           " has no " + jca::CpKindKeyword(e.kind) + " token " +
                                           std::to_string(ext.member_token));
    };
    if (jca::IsFieldRef(e.kind)) {
      bool want_static = e.kind == CpKind::kStaticFieldRef;
      for (const JcaField& f : c->fields) {
        if (f.is_static == want_static && f.token == ext.member_token &&
            SameTypes({e.field_type}, other, {f.type})) {
          return;
        }
      }
      fail();
    }
    if (e.kind == CpKind::kStaticMethodRef) {
      for (const JcaMethod& m : c->methods) {
        if (!jca::IsVirtual(m) && m.token == ext.member_token && SameTypes(e.params, other, m.params)) {
          return;
        }
      }
      fail();
    }
    // Virtual tokens may be inherited from further up, so only declared
    // methods and table slots are checked.
    if (ext.member_token >= c->public_method_table_base &&
        ext.member_token < c->public_method_table_base + c->public_method_table.size()) {
      const auto& sel = c->public_method_table[ext.member_token - c->public_method_table_base];
      if (SameTypes(e.params, other, sel.params)) return;
      fail();
    }
    if (!c->superclass) fail();
  }

  void BuildConstantPool() {
    Require(ComponentKind::kConstantPool, ComponentKind::kMethod);
    Require(ComponentKind::kConstantPool, ComponentKind::kStaticField);
    ByteWriter w;
    w.U2(static_cast<uint32_t>(pkg_.constant_pool.size()));
    for (size_t i = 0; i < pkg_.constant_pool.size(); ++i) {
      const CpEntry& e = pkg_.constant_pool[i];
      w.U1(static_cast<uint8_t>(e.kind));
      if (e.kind == CpKind::kClassRef) {
        if (const auto* ext = std::get_if<ExternalClass>(&e.class_target)) {
          CorpusClass(ext->package_token, ext->class_token, i);
        }
        w.U2(ClassRef(e.class_target, "ConstantPool"));
        w.U1(0);
        continue;
      }
      if (const auto* ext = std::get_if<ExternalMember>(&e.member)) {
        CheckExternalMember(e, *ext, i);
        w.U1(0x80u | ext->package_token);
        w.U1(ext->class_token);
        w.U1(ext->member_token);
        continue;
      }
      const auto& in = std::get<InternalMember>(e.member);
      switch (e.kind) {
        case CpKind::kStaticFieldRef: {
          auto it = static_offsets_.find(DeclaringField(in) + "." + in.member_name);
          if (it == static_offsets_.end()) {
            throw BuildError("ConstantPool", "entry " + std::to_string(i) +
                                                 " depends on StaticField: " + in.class_name +
                                                 "." + in.member_name + " is not allocated");
          }
          w.U1(0);
          w.U2(it->second);
          break;
        }
        case CpKind::kStaticMethodRef:
          w.U1(0);
          w.U2(MethodOffset("ConstantPool", in.class_name, in.member_name, e.params));
          break;
        case CpKind::kInstanceFieldRef: {
          std::string owner = DeclaringField(in);
          const JcaField* f = pkg_.FindClass(owner)->FindField(in.member_name);
          w.U2(ClassRef(owner, "ConstantPool"));
          w.U1(*f->token);
          break;
        }
        default: {
          const JcaMethod* m = DeclaringMethod(in, e.params);
          w.U2(ClassRef(in.class_name, "ConstantPool"));
          uint8_t token = *m->token;
          if (!IsPublicVisible(m->access)) token |= 0x80;
          w.U1(token);
          break;
        }
      }
    }
    Put(ComponentKind::kConstantPool, std::move(w).bytes());
  }

  std::string DeclaringField(const InternalMember& in) const {
    const JcaClass* c = pkg_.FindClass(in.class_name);
    for (size_t guard = 0; c && guard <= pkg_.classes.size(); ++guard) {
      if (c->FindField(in.member_name)) return c->name;
      const auto* name = c->superclass ? std::get_if<std::string>(&*c->superclass) : nullptr;
      c = name ? pkg_.FindClass(*name) : nullptr;
    }
    throw BuildError("ConstantPool", "field " + in.class_name + "." + in.member_name +
                                         " does not resolve");
  }

  const JcaMethod* DeclaringMethod(const InternalMember& in, const std::vector<Type>& params) const {
    const JcaClass* c = pkg_.FindClass(in.class_name);
    for (size_t guard = 0; c && guard <= pkg_.classes.size(); ++guard) {
      if (const JcaMethod* m = c->FindMethod(in.member_name, params)) return m;
      const auto* name = c->superclass ? std::get_if<std::string>(&*c->superclass) : nullptr;
      c = name ? pkg_.FindClass(*name) : nullptr;
    }
    throw BuildError("ConstantPool", "method " + in.class_name + "." + in.member_name +
                                         " does not resolve");
  }

  // ---- Export

  bool WantsExport() const {
    bool any_public = false, shareable = false;
    for (const JcaClass& c : pkg_.classes) {
      any_public |= c.access == Access::kPublic;
      shareable |= c.access == Access::kPublic && c.is_interface && c.is_shareable;
    }
    return any_public && (pkg_.applets.empty() || shareable);
  }

  template <typename T, typename Pred>
  static std::vector<const T*> DenseByToken(const std::vector<T>& items, Pred pred,
                                            const std::string& what) {
    std::vector<const T*> picked;
    for (const T& item : items) {
      if (pred(item)) picked.push_back(&item);
    }
    std::sort(picked.begin(), picked.end(),
              [](const T* a, const T* b) { return *a->token < *b->token; });
    for (size_t i = 0; i < picked.size(); ++i) {
      if (*picked[i]->token != i) {
        throw BuildError("Export", what + " tokens are not dense from 0");
      }
    }
    return picked;
  }

  void BuildExport() {
    if (!WantsExport()) return;
    Require(ComponentKind::kExport, ComponentKind::kClass);
    Require(ComponentKind::kExport, ComponentKind::kStaticField);
    Require(ComponentKind::kExport, ComponentKind::kMethod);
    auto classes = DenseByToken(
        pkg_.classes, [](const JcaClass& c) { return c.access == Access::kPublic; },
        "public class");
    ByteWriter w;
    w.U1(static_cast<uint32_t>(classes.size()));
    for (const JcaClass* c : classes) {
      auto fields = DenseByToken(
          c->fields,
          [](const JcaField& f) { return jca::IsAllocatedStatic(f) && IsPublicVisible(f.access); },
          c->name + " static field");
      auto methods = DenseByToken(c->methods, IsExportedStaticMethod, c->name + " static method");
      if (c->is_interface) {
        fields.clear();
        methods.clear();
      }
      w.U2(ClassRef(c->name, "Export"));
      w.U1(static_cast<uint32_t>(fields.size()));
      w.U1(static_cast<uint32_t>(methods.size()));
      for (const JcaField* f : fields) w.U2(static_offsets_.at(c->name + "." + f->name));
      for (const JcaMethod* m : methods) w.U2(MethodOffset("Export", c->name, m->name, m->params));
    }
    Put(ComponentKind::kExport, std::move(w).bytes());
  }

  // ---- Descriptor

  Bytes TypeNibbles(const std::vector<Type>& types) const {
    std::vector<uint8_t> nibbles;
    for (const Type& t : types) {
      uint8_t n = PrimitiveNibble(t.kind);
      if (t.array) n = t.kind == Type::Kind::kReference ? 0xE : static_cast<uint8_t>(n + 8);
      nibbles.push_back(n);
      if (t.kind == Type::Kind::kReference) {
        uint16_t ref = ClassRef(t.reference, "Descriptor");
        for (int shift = 12; shift >= 0; shift -= 4) nibbles.push_back((ref >> shift) & 0xF);
      }
    }
    Bytes out;
    out.push_back(static_cast<uint8_t>(nibbles.size()));
    for (size_t i = 0; i < nibbles.size(); i += 2) {
      uint8_t lo = i + 1 < nibbles.size() ? nibbles[i + 1] : 0;
      out.push_back(static_cast<uint8_t>((nibbles[i] << 4) | lo));
    }
    return out;
  }

  void BuildDescriptor() {
    Require(ComponentKind::kDescriptor, ComponentKind::kConstantPool);
    Require(ComponentKind::kDescriptor, ComponentKind::kClass);
    const size_t cp_count = pkg_.constant_pool.size();
    // type_descriptor_info: count, per-entry offsets, then the type strings.
    std::map<Bytes, uint16_t> pool;
    Bytes strings;
    const size_t strings_base = 2 + 2 * cp_count;
    auto intern = [&](const std::vector<Type>& types) -> uint16_t {
      Bytes enc = TypeNibbles(types);
      auto it = pool.find(enc);
      if (it != pool.end()) return it->second;
      size_t offset = strings_base + strings.size();
      if (offset > 0xFFFF) throw BuildError("Descriptor", "type descriptor pool too large");
      strings.insert(strings.end(), enc.begin(), enc.end());
      pool.emplace(enc, static_cast<uint16_t>(offset));
      return static_cast<uint16_t>(offset);
    };
    auto signature = [](const std::vector<Type>& params, const Type& ret) {
      std::vector<Type> all = params;
      all.push_back(ret);
      return all;
    };
    std::vector<uint16_t> cp_types;
    for (const CpEntry& e : pkg_.constant_pool) {
      if (e.kind == CpKind::kClassRef) {
        cp_types.push_back(0xFFFF);
      } else if (jca::IsFieldRef(e.kind)) {
        cp_types.push_back(intern({e.field_type}));
      } else {
        cp_types.push_back(intern(signature(e.params, e.return_type)));
      }
    }

    ByteWriter classes;
    classes.U1(static_cast<uint32_t>(order_.size()));
    for (const JcaClass* c : order_) {
      uint8_t access = (c->access == Access::kPublic ? 0x01 : 0) | (c->is_final ? 0x10 : 0) |
                       (c->is_interface ? 0x40 : 0) | (c->is_abstract ? 0x80 : 0);
      std::vector<ClassTarget> interfaces;
      if (c->is_interface) {
        interfaces = c->superinterfaces;
      } else {
        for (const auto& impl : c->interface_impls) interfaces.push_back(impl.interface);
      }
      std::vector<const JcaField*> fields;
      for (const JcaField& f : c->fields) {
        if (!f.is_static || jca::IsAllocatedStatic(f)) fields.push_back(&f);
      }
      classes.U1(*c->token);
      classes.U1(access);
      classes.U2(ClassRef(c->name, "Descriptor"));
      classes.U1(static_cast<uint32_t>(interfaces.size()));
      classes.U2(static_cast<uint32_t>(fields.size()));
      classes.U2(static_cast<uint32_t>(c->methods.size()));
      for (const ClassTarget& t : interfaces) classes.U2(ClassRef(t, "Descriptor"));
      for (const JcaField* f : fields) {
        uint8_t fa = MemberAccess(f->access) | (f->is_static ? 0x08 : 0) | (f->is_final ? 0x10 : 0);
        classes.U1(*f->token);
        classes.U1(fa);
        if (f->is_static) {
          classes.U1(0);
          classes.U2(static_offsets_.at(c->name + "." + f->name));
        } else {
          classes.U2(ClassRef(c->name, "Descriptor"));
          classes.U1(*f->token);
        }
        if (!f->type.array && f->type.kind != Type::Kind::kReference) {
          classes.U2(0x8000u | PrimitiveNibble(f->type.kind));
        } else {
          classes.U2(intern({f->type}));
        }
      }
      for (const JcaMethod& m : c->methods) {
        uint8_t ma = MemberAccess(m.access) | (m.is_static ? 0x08 : 0) | (m.is_final ? 0x10 : 0) |
                     (m.is_abstract ? 0x40 : 0) | (m.is_constructor() ? 0x80 : 0);
        classes.U1(*m.token);
        classes.U1(ma);
        MethodLayout layout;
        if (!c->is_interface) layout = method_layout_.at(MethodKey(c->name, m.name, m.params));
        classes.U2(layout.offset);
        classes.U2(intern(signature(m.params, m.return_type)));
        classes.U2(layout.bytecode_count);
        classes.U2(layout.handler_count);
        classes.U2(layout.handler_index);
      }
    }

    ByteWriter w;
    w.Append(classes.bytes());
    w.U2(static_cast<uint32_t>(cp_count));
    for (uint16_t t : cp_types) w.U2(t);
    w.Append(strings);
    Put(ComponentKind::kDescriptor, std::move(w).bytes());
  }

  static uint8_t MemberAccess(Access a) {
    switch (a) {
      case Access::kPublic:
        return 0x01;
      case Access::kPrivate:
        return 0x02;
      case Access::kProtected:
        return 0x04;
      default:
        return 0;
    }
  }

  // ---- ReferenceLocation

  static void DeltaEncode(std::vector<uint32_t> offsets, ByteWriter& w) {
    std::sort(offsets.begin(), offsets.end());
    Bytes deltas;
    uint32_t previous = 0;
    for (uint32_t off : offsets) {
      uint32_t gap = off - previous;
      while (gap >= 255) {
        deltas.push_back(255);
        gap -= 255;
      }
      deltas.push_back(static_cast<uint8_t>(gap));
      previous = off;
    }
    w.U2(static_cast<uint32_t>(deltas.size()));
    w.Append(deltas);
  }

  void BuildReferenceLocation() {
    Require(ComponentKind::kReferenceLocation, ComponentKind::kMethod);
    ByteWriter w;
    DeltaEncode(cap_.byte_index_operands, w);
    DeltaEncode(cap_.byte2_index_operands, w);
    Put(ComponentKind::kReferenceLocation, std::move(w).bytes());
  }

  // ---- Applet

  void BuildApplet() {
    if (pkg_.applets.empty()) return;
    Require(ComponentKind::kApplet, ComponentKind::kMethod);
    ByteWriter w;
    w.U1(static_cast<uint32_t>(pkg_.applets.size()));
    const std::vector<Type> install = {Type::Primitive(Type::Kind::kByte, true),
                                       Type::Primitive(Type::Kind::kShort),
                                       Type::Primitive(Type::Kind::kByte)};
    for (const jca::AppletDecl& a : pkg_.applets) {
      w.U1(static_cast<uint32_t>(a.aid.size()));
      w.Append(a.aid);
      w.U2(MethodOffset("Applet", a.class_name, "install", install));
    }
    Put(ComponentKind::kApplet, std::move(w).bytes());
  }

  // ---- Header / Directory

  void BuildHeader() {
    Require(ComponentKind::kHeader, ComponentKind::kClass);
    uint8_t flags = (UsesInt(pkg_) ? kAccInt : 0) |
                    (cap_.Has(ComponentKind::kExport) ? kAccExport : 0) |
                    (cap_.Has(ComponentKind::kApplet) ? kAccApplet : 0);
    ByteWriter w;
    w.U4(0xDECAFFED);
    w.U1(2);  // minor
    w.U1(2);  // major
    w.U1(flags);
    w.U1(pkg_.version.minor);
    w.U1(pkg_.version.major);
    w.U1(static_cast<uint32_t>(pkg_.aid.size()));
    w.Append(pkg_.aid);
    std::string name = pkg_.name;
    std::replace(name.begin(), name.end(), '.', '/');
    w.U1(static_cast<uint32_t>(name.size()));
    w.Append(ByteView(reinterpret_cast<const uint8_t*>(name.data()), name.size()));
    Put(ComponentKind::kHeader, std::move(w).bytes());
  }

  void BuildDirectory() {
    constexpr uint16_t kDirectoryInfoSize = 2 * kDirectorySlots + 6 + 3;
    ByteWriter w;
    for (size_t slot = 0; slot < kDirectorySlots; ++slot) {
      auto kind = ComponentFromTag(static_cast<uint8_t>(slot + 1));
      if (kind == ComponentKind::kDirectory) {
        w.U2(kDirectoryInfoSize);
      } else if (kind && cap_.Has(*kind)) {
        w.U2(cap_.Get(*kind).size());
      } else {
        w.U2(0);
      }
    }
    w.U2(static_image_size_);
    w.U2(array_init_count_);
    w.U2(array_init_size_);
    w.U1(static_cast<uint32_t>(pkg_.imports.size()));
    w.U1(static_cast<uint32_t>(pkg_.applets.size()));
    w.U1(0);  // custom components
    Put(ComponentKind::kDirectory, std::move(w).bytes());
  }

  const JcaPackage& pkg_;
  const jca::NativeMethodTable& natives_;
  const BuildOptions& opts_;
  CapFile cap_;

  std::vector<const JcaClass*> order_;
  std::vector<StaticFieldSlot> slots_;
  std::map<std::string, uint16_t> static_offsets_;
  uint16_t static_image_size_ = 0;
  uint16_t array_init_count_ = 0;
  uint32_t array_init_size_ = 0;
  std::map<std::string, uint16_t> class_offsets_;
  std::map<std::string, MethodLayout> method_layout_;
};

}  // namespace

Bytes PrimitiveBytes(Type::Kind kind, int64_t value) {
  ByteWriter w;
  uint32_t u = static_cast<uint32_t>(value);
  switch (PrimitiveSize(kind)) {
    case 1:
      w.U1(u);
      break;
    case 2:
      w.U2(u);
      break;
    default:
      w.U4(u);
      break;
  }
  return std::move(w).bytes();
}

std::vector<StaticFieldSlot> LayoutStaticFields(const JcaPackage& pkg) {
  std::vector<StaticFieldSlot> slots;
  for (const JcaClass& cls : pkg.classes) {
    for (const JcaField& f : cls.fields) {
      if (!jca::IsAllocatedStatic(f)) continue;
      StaticFieldSlot s;
      s.class_name = cls.name;
      s.field = &f;
      s.ordinal = static_cast<uint16_t>(slots.size());
      if (f.type.is_reference_like()) {
        s.non_default = f.initializer.has_value();
      } else {
        s.non_default = f.initializer && f.initializer->values.at(0) != 0;
      }
      slots.push_back(s);
    }
  }
  // Segments: initialized reference arrays, other references, default
  // primitives, non-default primitives.
  auto segment = [](const StaticFieldSlot& s) {
    if (s.field->type.is_reference_like()) return s.field->initializer ? 0 : 1;
    return s.non_default ? 3 : 2;
  };
  uint32_t offset = 0;
  for (int seg = 0; seg < 4; ++seg) {
    for (StaticFieldSlot& s : slots) {
      if (segment(s) != seg) continue;
      s.offset = static_cast<uint16_t>(offset);
      offset += seg < 2 ? 2 : static_cast<uint32_t>(PrimitiveSize(s.field->type.kind));
    }
  }
  return slots;
}

std::vector<jca::Instruction> InjectNativeStub(const JcaMethod& method, uint16_t index) {
  std::string ret = "return";
  if (method.return_type.is_reference_like()) {
    ret = "areturn";
  } else if (method.return_type.kind == Type::Kind::kInt) {
    ret = "ireturn";
  } else if (!method.return_type.is_void()) {
    ret = "sreturn";
  }
  std::vector<jca::Instruction> body(3);
  body[0].mnemonic = "sspush";
  body[0].operands = {jca::Operand::Immediate(index)};
  body[1].mnemonic = "impdep1";
  body[2].mnemonic = ret;
  return body;
}

CapFile BuildCap(const JcaPackage& pkg, const jca::NativeMethodTable& natives,
                 const BuildOptions& options) {
  return Builder(pkg, natives, options).Run();
}

}  // namespace jcimage::cap
