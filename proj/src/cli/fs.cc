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

#include <cstdio>
#include <ostream>

#include "jcimage/cli/commands.h"
#include "jcimage/flash/block.h"
#include "jcimage/flash/filesystem.h"
#include "jcimage/hex/intel_hex.h"
#include "jcimage/util/file_io.h"

namespace jcimage::cli {

namespace {

std::string Addr(uint32_t a) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%06X", a);
  return buf;
}

flash::MountOptions ReadOnly() {
  flash::MountOptions o;
  o.repair = false;
  return o;
}

}  // namespace

flash::FlashDevice LoadDeviceImage(const std::filesystem::path& path,
                                   const image::MemoryConfig& config,
                                   std::optional<uint32_t> base_address) {
  if (path.extension() != ".hex") {
    return flash::FlashDevice::LoadImage(path, config.sector_sizes, config.reserved_sector);
  }
  flash::FlashDevice device(config.sector_sizes, config.reserved_sector);
  uint32_t base = base_address.value_or(config.base_address);
  Bytes cells(device.size(), 0xFF);
  for (const auto& [addr, byte] : hex::DecodeHex(ReadFileText(path))) {
    if (addr < base || addr - base >= cells.size()) {
      throw InputError("cli", path.string() + ": address " + std::to_string(addr) +
                                  " outside the configured flash");
    }
    cells[addr - base] = byte;
  }
  device.LoadCells(cells);
  return device;
}

int FsDump(const flash::FlashDevice& device, std::ostream& out) {
  bool corrupt = false;
  for (const flash::SectorScan& scan : flash::ScanDevice(device)) {
    for (const flash::ScannedBlock& b : scan.blocks) {
      out << "sector " << scan.sector << " " << Addr(b.address) << " "
          << flash::BlockStateName(b.state) << " tag=" << ToHex(b.tag) << " len=" << b.data_length
          << " crc=" << (b.hashsum_ok ? "ok" : "bad") << "\n";
    }
    if (scan.corrupt) {
      corrupt = true;
      out << "sector " << scan.sector << " corrupt at "
          << Addr(scan.corrupt_at.value_or(scan.write_cursor)) << "\n";
    }
  }
  return corrupt ? kExitInput : kExitOk;
}

int FsGet(const flash::FlashDevice& device, const std::string& tag_hex, std::ostream& out) {
  Bytes tag = FromHex(tag_hex);
  flash::FlashDevice copy = device;
  auto fs = flash::FileSystem::Mount(copy, ReadOnly());
  std::optional<Bytes> data = fs.Read(tag);
  if (!data) return kExitNotFound;
  out << ToHex(*data) << "\n";
  return kExitOk;
}

int FsVerify(const flash::FlashDevice& device, std::ostream& out) {
  size_t live = 0, superseded = 0, uncommitted = 0, bad = 0, corrupt_sectors = 0;
  uint64_t written = 0, garbage = 0;
  for (const flash::SectorScan& scan : flash::ScanDevice(device)) {
    corrupt_sectors += scan.corrupt ? 1 : 0;
    written += scan.write_cursor - device.sector(scan.sector).offset;
    garbage += scan.erased_filler;
    for (const flash::ScannedBlock& b : scan.blocks) {
      switch (b.state) {
        case flash::BlockState::kLive:
          ++live;
          break;
        case flash::BlockState::kSuperseded:
          ++superseded;
          garbage += b.total_size;
          break;
        case flash::BlockState::kUncommitted:
          ++uncommitted;
          garbage += b.total_size;
          break;
        case flash::BlockState::kCorrupt:
          ++bad;
          garbage += b.total_size;
          break;
      }
    }
  }
  double ratio = written ? static_cast<double>(garbage) / static_cast<double>(written) : 0.0;
  char ratio_text[32];
  std::snprintf(ratio_text, sizeof ratio_text, "%.4f", ratio);
  out << "live " << live << "\nsuperseded " << superseded << "\nuncommitted " << uncommitted
      << "\ncrc_bad " << bad << "\ncorrupt_sectors " << corrupt_sectors << "\nwritten_bytes "
      << written << "\ngarbage_bytes " << garbage << "\ngarbage_ratio " << ratio_text << "\n";
  out << (bad || corrupt_sectors ? "FAIL" : "OK") << "\n";
  return bad || corrupt_sectors ? kExitInput : kExitOk;
}

}  // namespace jcimage::cli
