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

#include <string>
#include <vector>

#include "fixtures.h"
#include "jcimage/cap/builder.h"
#include "jcimage/jca/natives.h"
#include "jcimage/jca/parser.h"

namespace jcimage::testing {

// The three-package corpus under fixtures/corpus, in dependency order.
struct Corpus {
  std::vector<jca::JcaPackage> packages;
  jca::NativeMethodTable natives;

  Corpus(const Corpus&) = delete;
  Corpus& operator=(const Corpus&) = delete;

  explicit Corpus(const std::vector<std::string>& files = {"util", "crypto", "wallet"}) {
    for (const auto& f : files) {
      packages.push_back(jca::ParseJca(ReadFixture("corpus/jca/" + f + ".jca")));
    }
    std::vector<const jca::JcaPackage*> ptrs;
    for (const auto& p : packages) ptrs.push_back(&p);
    natives = jca::CollectNativeMethods(ptrs);
  }

  cap::BuildOptions Options() const {
    cap::BuildOptions o;
    for (const auto& p : packages) o.corpus[p.aid] = &p;
    return o;
  }

  std::vector<cap::CapFile> BuildAll() const {
    std::vector<cap::CapFile> out;
    auto opts = Options();
    for (const auto& p : packages) out.push_back(cap::BuildCap(p, natives, opts));
    return out;
  }

  const jca::JcaPackage& Get(const std::string& name) const {
    for (const auto& p : packages) {
      if (p.name == name) return p;
    }
    throw std::runtime_error("no package " + name);
  }
};

}  // namespace jcimage::testing
