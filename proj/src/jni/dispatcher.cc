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

#include "jcimage/jni/dispatcher.h"

#include <cctype>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "jcimage/jca/parser.h"
#include "jcimage/util/digest.h"

namespace jcimage::jni {

using jca::Type;

namespace {

std::string Upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string Hex(unsigned value, int digits) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%0*X", digits, value);
  return buf;
}

bool IsCIdentifier(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

// Locals of the generated dispatcher, plus a few keywords a Java name could hit.
const std::set<std::string>& ReservedNames() {
  static const std::set<std::string> names = {
      "stack", "heap", "context", "index", "ret", "self", "auto", "char", "default", "delete",
      "double", "float", "goto", "inline", "long", "register", "signed", "sizeof", "struct",
      "template", "typedef", "union", "unsigned", "volatile"};
  return names;
}

// Declared parameter names when all are usable, else param_00, param_01...
std::vector<std::string> ParamNames(const jca::NativeMethod& m) {
  std::vector<std::string> names;
  bool usable = m.param_names.size() == m.params.size();
  std::set<std::string> seen;
  for (const std::string& n : m.param_names) {
    usable = usable && IsCIdentifier(n) && !ReservedNames().count(n) && seen.insert(n).second;
  }
  for (size_t i = 0; i < m.params.size(); ++i) {
    if (usable) {
      names.push_back(m.param_names[i]);
    } else {
      char buf[16];
      std::snprintf(buf, sizeof buf, "param_%02zu", i);
      names.push_back(buf);
    }
  }
  return names;
}

// Canonical text of the generator input; its digest goes in the banner.
std::string InputText(const jca::NativeMethodTable& table, const EntryPoint& entry,
                      const GeneratorOptions& options) {
  std::ostringstream s;
  s << "entry " << int(entry.package_token) << " " << int(entry.class_token) << " "
    << int(entry.method_token) << "\n";
  s << "pop_receiver " << options.pop_receiver << "\n";
  for (const auto& m : table.entries) {
    s << m.index << " " << int(m.package_id) << " " << m.package_name << " " << m.class_name << " "
      << m.method_name << " " << (m.is_static ? "static" : "instance") << " "
      << jca::TypeText(m.return_type) << " (";
    for (size_t i = 0; i < m.params.size(); ++i) {
      s << (i ? "," : "") << jca::TypeText(m.params[i]);
      if (i < m.param_names.size()) s << " " << m.param_names[i];
    }
    s << ")\n";
  }
  return s.str();
}

}  // namespace

std::string CTypeName(const Type& type) {
  if (type.is_reference_like()) return "jref_t";
  switch (type.kind) {
    case Type::Kind::kByte:
      return "jbyte_t";
    case Type::Kind::kBoolean:
      return "jbool_t";
    case Type::Kind::kShort:
      return "jshort_t";
    case Type::Kind::kInt:
      return "jint_t";
    default:
      return "void";
  }
}

// boolean travels as a byte on the operand stack.
static std::string StackSuffix(const Type& type) {
  if (type.is_reference_like()) return "Reference";
  switch (type.kind) {
    case Type::Kind::kByte:
    case Type::Kind::kBoolean:
      return "Byte";
    case Type::Kind::kShort:
      return "Short";
    case Type::Kind::kInt:
      return "Int";
    default:
      return "";
  }
}

std::string PushOperation(const Type& type) {
  return type.is_void() ? std::string() : "push_" + StackSuffix(type);
}

std::vector<PopOp> PopSequence(const std::vector<Type>& params) {
  std::vector<PopOp> ops;
  for (size_t i = params.size(); i-- > 0;) {
    ops.push_back({i, CTypeName(params[i]), "pop_" + StackSuffix(params[i])});
  }
  return ops;
}

std::string IndexMacroName(const jca::NativeMethod& m) {
  return Upper(m.class_name) + "_" + Upper(m.method_name);
}

std::string FunctionName(const jca::NativeMethod& m) { return m.class_name + "_" + m.method_name; }

EntryPoint ResolveEntryPoint(const std::vector<const jca::JcaPackage*>& packages,
                             const std::vector<uint8_t>& package_ids,
                             const EntryPointNames& names) {
  auto fail = [&](const std::string& why) {
    throw InputError("dispatcher_gen", "entry point " + names.package_name + "." +
                                           names.class_name + "." + names.method_name + ": " +
                                           why);
  };
  for (size_t i = 0; i < packages.size(); ++i) {
    const jca::JcaPackage& pkg = *packages[i];
    if (pkg.name != names.package_name) continue;
    const jca::JcaClass* cls = pkg.FindClass(names.class_name);
    if (!cls) fail("no such class");
    const jca::JcaMethod* found = nullptr;
    for (const jca::JcaMethod& m : cls->methods) {
      if (m.name != names.method_name || jca::IsVirtual(m) || !m.is_static) continue;
      if (found) fail("static method name is overloaded");
      found = &m;
    }
    if (!found) fail("no such static method");
    EntryPoint e;
    e.package_token = i < package_ids.size() ? package_ids[i] : static_cast<uint8_t>(i);
    e.class_token = *cls->token;
    e.method_token = *found->token;
    return e;
  }
  fail("package not in corpus");
  return {};
}

std::string GenerateHeader(const jca::NativeMethodTable& table, const EntryPoint& entry,
                           const GeneratorOptions& options) {
  std::map<std::string, const jca::NativeMethod*> macros, functions;
  for (const auto& m : table.entries) {
    if (!macros.emplace(IndexMacroName(m), &m).second) throw NameCollision(IndexMacroName(m));
    if (!functions.emplace(FunctionName(m), &m).second) throw NameCollision(FunctionName(m));
  }

  std::ostringstream out;
  out << "/*\n"
      << " * jni.h: Java Card native method dispatcher.\n"
      << " * Generated by jcimage " << options.generator_version << ". Do not edit.\n"
      << " * Input sha256: " << Sha256Hex(InputText(table, entry, options)) << "\n"
      << " * Extension: NATIVE_METHOD_COUNT at the end of this file gives the number of\n"
      << " * native methods so the host can size its tables.\n"
      << " */\n"
      << "#ifndef JCIMAGE_JNI_H\n"
      << "#define JCIMAGE_JNI_H\n\n";

  out << "/* STARTING METHOD PARAMETERS */\n"
      << "#define STARTING_JAVACARD_PACKAGE " << Hex(entry.package_token, 2) << "\n"
      << "#define STARTING_JAVACARD_CLASS   " << Hex(entry.class_token, 2) << "\n"
      << "#define STARTING_JAVACARD_METHOD  " << Hex(entry.method_token, 2) << "\n\n";

  out << "/**\n"
      << " * Java types to provide by the JCVM implementation:\n"
      << " *   - jref_t: for Java Card reference\n"
      << " *   - jshort_t: for Java Card short value\n"
      << " *   - jbyte_t: for Java Card byte value\n"
      << " *   - jbool_t: for Java Card boolean value\n"
      << " *   - jint_t: for Java Card integer value\n"
      << " */\n\n";

  auto with_receiver = [&](const jca::NativeMethod& m) {
    return options.pop_receiver && !m.is_static;
  };

  out << "/* METHOD SIGNATURES TO IMPLEMENT */\n";
  for (const auto& m : table.entries) {
    auto names = ParamNames(m);
    out << "extern " << CTypeName(m.return_type) << " " << FunctionName(m) << "(";
    bool first = true;
    if (with_receiver(m)) {
      out << "jref_t self";
      first = false;
    }
    for (size_t i = 0; i < m.params.size(); ++i) {
      out << (first ? "" : ", ") << CTypeName(m.params[i]) << " " << names[i];
      first = false;
    }
    out << ");\n";
  }
  out << "\n";

  size_t width = 0;
  for (const auto& m : table.entries) width = std::max(width, IndexMacroName(m).size());
  for (const auto& m : table.entries) {
    std::string name = IndexMacroName(m);
    out << "#define " << name << std::string(width - name.size() + 1, ' ') << Hex(m.index, 4)
        << "\n";
  }
  if (!table.empty()) out << "\n";

  out << "void callJCNativeMethod(Context& context, jshort_t index) {\n"
      << "  Stack& stack = context.getStack();\n"
      << "  Heap& heap = context.getHeap();\n"
      << "  (void)heap;\n"
      << "  switch (static_cast<unsigned short>(index)) {\n";
  for (const auto& m : table.entries) {
    auto names = ParamNames(m);
    out << "    case " << IndexMacroName(m) << ": {\n";
    for (const PopOp& op : PopSequence(m.params)) {
      out << "      " << op.c_type << " " << names[op.param] << " = stack." << op.operation
          << "();\n";
    }
    std::string args;
    if (with_receiver(m)) {
      out << "      jref_t self = stack.pop_Reference();\n";
      args = "self";
    }
    for (const auto& n : names) args += (args.empty() ? "" : ", ") + n;
    std::string call = FunctionName(m) + "(" + args + ");";
    if (m.return_type.is_void()) {
      out << "      " << call << "\n";
    } else {
      out << "      " << CTypeName(m.return_type) << " ret = " << call << "\n"
          << "      stack." << PushOperation(m.return_type) << "(ret);\n";
    }
    out << "      break;\n"
        << "    }\n";
  }
  out << "    default:\n"
      << "      // Unknown native method index: a Java SecurityException must be thrown.\n"
      << "      throw SecurityException();\n"
      << "  }\n"
      << "}\n\n";

  out << "#define NATIVE_METHOD_COUNT " << table.size() << "\n\n"
      << "#endif  // JCIMAGE_JNI_H\n";
  return out.str();
}

}  // namespace jcimage::jni
