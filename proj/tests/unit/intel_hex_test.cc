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

#include "jcimage/hex/intel_hex.h"

#include <gtest/gtest.h>

namespace jcimage::hex {
namespace {

TEST(IntelHex, EmptyImageIsSingleEofRecord) {
  const Bytes image(4096, 0xFF);
  EXPECT_EQ(EncodeHex(image, kStm32FlashBase), ":00000001FF\n");
  EXPECT_TRUE(DecodeHex(":00000001FF").empty());
}

TEST(IntelHex, SixteenBytesAtOffsetZero) {
  Bytes image(64, 0xFF);
  for (int i = 0; i < 16; ++i) image[i] = static_cast<uint8_t>(i);
  const std::string text = EncodeHex(image, kStm32FlashBase);
  EXPECT_EQ(text,
            ":020000040800F2\n"
            ":10000000000102030405060708090A0B0C0D0E0F78\n"
            ":00000001FF\n");
}

TEST(IntelHex, ChecksumRule) {
  // Classic example record from the format description.
  EXPECT_EQ(FormatRecord(RecordType::kData, 0x0030,
                         Bytes{0x02, 0x33, 0x7A}),
            ":0300300002337A1E");
}

TEST(IntelHex, ExtendedAddressAtBoundary) {
  Bytes image(0x20010, 0xFF);
  image[0xFFFF] = 0x11;
  image[0x10000] = 0x22;
  const std::string text = EncodeHex(image, 0x08000000);
  const SparseImage decoded = DecodeHex(text);
  ASSERT_EQ(decoded.size(), 2u);
  EXPECT_EQ(decoded.at(0x0800FFFF), 0x11);
  EXPECT_EQ(decoded.at(0x08010000), 0x22);
  EXPECT_NE(text.find(":020000040801F1"), std::string::npos);
}

TEST(IntelHex, TamperedChecksumRejected) {
  EXPECT_THROW(DecodeHex(":0300300002337A1F\n:00000001FF\n"), ChecksumMismatch);
}

TEST(IntelHex, MalformedRecordsRejected) {
  EXPECT_THROW(DecodeHex("0300300002337A1E\n:00000001FF\n"), MalformedRecord);
  EXPECT_THROW(DecodeHex(":0300300002337A\n:00000001FF\n"), MalformedRecord);
  EXPECT_THROW(DecodeHex(":0300300002337A1E\n"), MalformedRecord);
  EXPECT_THROW(DecodeHex(":0300300002G37A1E\n:00000001FF\n"), MalformedRecord);
}

}  // namespace
}  // namespace jcimage::hex
