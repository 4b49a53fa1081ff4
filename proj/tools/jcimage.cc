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

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "jcimage/cli/commands.h"
#include "jcimage/error.h"

namespace {

std::optional<uint32_t> ParseAddress(const std::string& text) {
  if (text.empty()) return std::nullopt;
  size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(text, &used, 16);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || v > 0xFFFFFFFFul) {
    throw jcimage::InputError("cli", "--base-address: not a 32-bit hex number: " + text);
  }
  return static_cast<uint32_t>(v);
}

void SetupLogging(int verbosity) {
  auto logger = spdlog::stderr_color_mt("jcimage");
  logger->set_pattern("%^%l%$: %v");
  spdlog::set_default_logger(logger);
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("JCIMAGE_LOG")) level = spdlog::level::from_str(env);
  if (verbosity == 1) level = std::min(level, spdlog::level::info);
  if (verbosity >= 2) level = spdlog::level::debug;
  spdlog::set_level(level);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Java Card package to STM32 flash image builder", "jcimage"};
  app.set_version_flag("--version", std::string(JCIMAGE_VERSION));
  app.require_subcommand(1);
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "More logging (repeatable)");
  std::string base_text;
  app.add_option("--base-address", base_text, "Flash base address in hex (default 08000000)");

  jcimage::cli::BuildPaths paths;
  std::string config_path, jca_dir, out_dir;
  CLI::App* build = app.add_subcommand("build", "Build CAP files, jni.h and the flash image");
  build->add_option("--config", config_path, "Memory/package config (JSON)")->required();
  build->add_option("--jca-dir", jca_dir, "Directory of <package>.jca files")->required();
  build->add_option("--out", out_dir, "Output directory")->required();

  build->fallthrough();

  CLI::App* fs = app.add_subcommand("fs", "Inspect a flash image");
  fs->fallthrough();
  fs->require_subcommand(1);
  std::string image_path, fs_config, tag_hex;
  fs->add_option("--image", image_path, "Image file (.hex or raw .bin)")->required();
  fs->add_option("--config", fs_config, "Config giving the flash geometry");
  CLI::App* dump = fs->add_subcommand("dump", "List every block");
  CLI::App* get = fs->add_subcommand("get", "Print the data of a tag in hex");
  get->add_option("tag", tag_hex, "Tag bytes in hex, e.g. 00 or 0102")->required();
  CLI::App* verify = fs->add_subcommand("verify", "Re-check hashsums, report garbage");
  for (CLI::App* sub : {dump, get, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : jcimage::cli::kExitInput;
  }
  SetupLogging(verbosity);

  try {
    std::optional<uint32_t> base = ParseAddress(base_text);
    if (build->parsed()) {
      paths.config = config_path;
      paths.jca_dir = jca_dir;
      paths.out_dir = out_dir;
      paths.base_address = base;
      jcimage::cli::BuildReport report = jcimage::cli::RunBuild(paths);
      for (const std::string& w : report.warnings) spdlog::warn("{}", w);
      spdlog::info("{} package(s), {} native method(s), {} image bytes in {} blocks",
                   report.packages.size(), report.native_method_count,
                   report.image_payload_bytes, report.image_blocks);
      return jcimage::cli::kExitOk;
    }
    jcimage::image::MemoryConfig config = fs_config.empty()
                                              ? jcimage::image::MemoryConfig::Default()
                                              : jcimage::image::LoadMemoryConfig(fs_config);
    auto device = jcimage::cli::LoadDeviceImage(image_path, config, base);
    if (dump->parsed()) return jcimage::cli::FsDump(device, std::cout);
    if (get->parsed()) {
      int rc = jcimage::cli::FsGet(device, tag_hex, std::cout);
      if (rc == jcimage::cli::kExitNotFound) spdlog::error("tag {} not found", tag_hex);
      return rc;
    }
    if (verify->parsed()) return jcimage::cli::FsVerify(device, std::cout);
    return jcimage::cli::kExitInternal;
  } catch (const jcimage::Error& e) {
    spdlog::error("{}: {}", e.module(), e.what());
    return jcimage::cli::kExitInput;
  } catch (const std::exception& e) {
    spdlog::error("internal error: {}", e.what());
    return jcimage::cli::kExitInternal;
  }
}
