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

#include "jcimage/jca/printer.h"

#include <cstdio>
#include <sstream>

namespace jcimage::jca {
namespace {

std::string HexByte(uint8_t b) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%02X", b);
  return buf;
}

std::string AidText(const Bytes& aid) {
  std::string out;
  for (size_t i = 0; i < aid.size(); ++i) {
    if (i) out += ":";
    out += HexByte(aid[i]);
  }
  return out;
}

std::string VersionText(const Version& v) {
  return std::to_string(v.major) + "." + std::to_string(v.minor);
}

std::string TypeList(const std::vector<Type>& types) {
  std::string out = "(";
  for (size_t i = 0; i < types.size(); ++i) {
    if (i) out += ", ";
    out += TypeText(types[i]);
  }
  return out + ")";
}

std::string MemberText(const std::variant<InternalMember, ExternalMember>& member) {
  if (const auto* in = std::get_if<InternalMember>(&member)) {
    return in->class_name + "." + in->member_name;
  }
  const auto& ext = std::get<ExternalMember>(member);
  return std::to_string(ext.package_token) + "." + std::to_string(ext.class_token) + "." +
         std::to_string(ext.member_token);
}

class Printer {
 public:
  std::string Run(const JcaPackage& pkg) {
    Line(".package " + pkg.name + " {");
    ++depth_;
    Line(".aid " + AidText(pkg.aid) + ";");
    Line(".version " + VersionText(pkg.version) + ";");
    if (!pkg.imports.empty()) {
      Open(".imports");
      for (const ImportEntry& imp : pkg.imports) {
        Line(AidText(imp.aid) + " " + VersionText(imp.version) + ";");
      }
      Close();
    }
    Open(".applets");
    for (const AppletDecl& a : pkg.applets) Line(AidText(a.aid) + " " + a.class_name + ";");
    Close();
    if (!pkg.constant_pool.empty()) {
      Open(".constantPool");
      for (size_t i = 0; i < pkg.constant_pool.size(); ++i) {
        Line(CpText(pkg.constant_pool[i]) + ";  // " + std::to_string(i));
      }
      Close();
    }
    for (const JcaClass& cls : pkg.classes) Class(cls);
    --depth_;
    Line("}");
    return out_.str();
  }

 private:
  void Line(const std::string& text) {
    for (int i = 0; i < depth_; ++i) out_ << '\t';
    out_ << text << '\n';
  }
  void Open(const std::string& head) {
    Line(head + " {");
    ++depth_;
  }
  void Close() {
    --depth_;
    Line("}");
  }

  static std::string CpText(const CpEntry& e) {
    std::string kw = CpKindKeyword(e.kind);
    if (e.kind == CpKind::kClassRef) return kw + " " + ClassTargetText(e.class_target);
    if (IsFieldRef(e.kind)) return kw + " " + TypeText(e.field_type) + " " + MemberText(e.member);
    return kw + " " + TypeText(e.return_type) + " " + MemberText(e.member) + TypeList(e.params);
  }

  void Class(const JcaClass& cls) {
    std::string head = cls.is_interface ? ".interface " : ".class ";
    head += AccessKeyword(cls.access);
    if (cls.is_abstract) head += " abstract";
    if (cls.is_final) head += " final";
    if (cls.is_shareable) head += " shareable";
    if (cls.is_remote) head += " remote";
    head += " " + cls.name;
    if (cls.token) head += " " + std::to_string(*cls.token);
    if (cls.superclass) head += " extends " + ClassTargetText(*cls.superclass);
    if (!cls.superinterfaces.empty()) {
      head += " extends ";
      for (size_t i = 0; i < cls.superinterfaces.size(); ++i) {
        if (i) head += ", ";
        head += ClassTargetText(cls.superinterfaces[i]);
      }
    }
    Open(head);
    RefBlock(".shareableInterfaces", cls.shareable_interfaces);
    RefBlock(".remoteInterfaces", cls.remote_interfaces);
    if (!cls.fields.empty()) {
      Open(".fields");
      for (const JcaField& f : cls.fields) Field(f);
      Close();
    }
    Table(".publicMethodTable", cls.public_method_table_base, cls.public_method_table);
    Table(".packageMethodTable", cls.package_method_table_base, cls.package_method_table);
    if (!cls.interface_impls.empty()) {
      Open(".implementedInterfaceInfoTable");
      for (const InterfaceImpl& impl : cls.interface_impls) {
        Open(".interface " + ClassTargetText(impl.interface));
        for (uint8_t t : impl.method_tokens) Line(std::to_string(t) + ";");
        Close();
      }
      Close();
    }
    for (const JcaMethod& m : cls.methods) Method(m);
    Close();
  }

  void RefBlock(const std::string& head, const std::vector<ClassTarget>& refs) {
    if (refs.empty()) return;
    Open(head);
    for (const ClassTarget& t : refs) Line(ClassTargetText(t) + ";");
    Close();
  }

  void Table(const std::string& head, uint8_t base, const std::vector<MethodSelector>& table) {
    if (table.empty() && base == 0) return;
    Open(head + " " + std::to_string(base));
    for (const MethodSelector& sel : table) Line(sel.name + TypeList(sel.params) + ";");
    Close();
  }

  void Field(const JcaField& f) {
    std::string text = AccessKeyword(f.access);
    if (f.is_static) text += " static";
    if (f.is_final) text += " final";
    if (f.is_transient) text += " transient";
    text += " " + TypeText(f.type) + " " + f.name;
    if (f.token) text += " " + std::to_string(*f.token);
    if (f.initializer) {
      text += " = ";
      std::string values;
      for (size_t i = 0; i < f.initializer->values.size(); ++i) {
        if (i) values += ", ";
        values += std::to_string(f.initializer->values[i]);
      }
      text += f.initializer->array ? "{" + values + "}" : values;
    }
    Line(text + ";");
  }

  void Method(const JcaMethod& m) {
    std::string head = ".method ";
    head += AccessKeyword(m.access);
    if (m.is_abstract) head += " abstract";
    if (m.is_static) head += " static";
    if (m.is_final) head += " final";
    if (m.is_native) head += " native";
    head += " " + TypeText(m.return_type) + " " + m.name + "(";
    for (size_t i = 0; i < m.params.size(); ++i) {
      if (i) head += ", ";
      head += TypeText(m.params[i]);
      if (i < m.param_names.size() && !m.param_names[i].empty()) head += " " + m.param_names[i];
    }
    head += ")";
    if (m.token) head += " " + std::to_string(*m.token);
    if (!m.has_body) {
      Line(head + ";");
      return;
    }
    Open(head);
    if (m.max_stack) Line(".stack " + std::to_string(*m.max_stack) + ";");
    if (m.max_locals) Line(".locals " + std::to_string(*m.max_locals) + ";");
    if (m.declared_nargs) Line(".args " + std::to_string(*m.declared_nargs) + ";");
    for (const Instruction& ins : m.body) {
      std::string text;
      for (const std::string& l : ins.labels) text += l + ": ";
      text += ins.mnemonic;
      for (const Operand& op : ins.operands) {
        text += " ";
        text += op.kind == Operand::Kind::kLabel ? op.label : std::to_string(op.value);
      }
      Line(text + ";");
    }
    for (const std::string& l : m.trailing_labels) Line(l + ":");
    if (!m.handlers.empty()) {
      Open(".exceptionTable");
      for (const ExceptionHandler& h : m.handlers) {
        Line(h.start_label + " " + h.end_label + " " + h.handler_label + " " +
             (h.catch_type ? std::to_string(h.catch_type) : std::string("any")) + ";");
      }
      Close();
    }
    Close();
  }

  std::ostringstream out_;
  int depth_ = 0;
};

}  // namespace

std::string PrintPackage(const JcaPackage& pkg) { return Printer().Run(pkg); }

}  // namespace jcimage::jca
