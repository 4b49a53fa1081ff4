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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jcimage {

// Root of every error raised by the toolchain. `module()` names the pipeline
// stage that failed so the CLI can report it.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message)
      : std::runtime_error(message), module_(std::move(module)) {}

  const std::string& module() const { return module_; }

 private:
  std::string module_;
};

// Bad input: malformed text, inconsistent config, missing files.
class InputError : public Error {
 public:
  using Error::Error;
};

// I/O failure with the offending path.
class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error("io", path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace jcimage
