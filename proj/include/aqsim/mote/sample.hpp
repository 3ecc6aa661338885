// Copyright 2026 The aqsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace aqsim {

/// One mote sample: a 4-byte sampling counter plus the four raw ADC channel
/// values (two electrodes per gas sensor), 4 bytes each. 20 bytes on the wire.
struct SampleRecord {
  std::uint32_t counter = 0;
  std::uint32_t no2_we = 0;
  std::uint32_t no2_ae = 0;
  std::uint32_t o3_we = 0;
  std::uint32_t o3_ae = 0;

  bool operator==(const SampleRecord&) const = default;
};

inline constexpr std::size_t kSampleWireSize = 20;

/// Wire image: counter, no2_we, no2_ae, o3_we, o3_ae as 32-bit big-endian
/// unsigned integers, in that order.
inline std::array<std::uint8_t, kSampleWireSize> serialize_sample(
    const SampleRecord& record) {
  std::array<std::uint8_t, kSampleWireSize> out{};
  const std::uint32_t fields[5] = {record.counter, record.no2_we, record.no2_ae,
                                   record.o3_we, record.o3_ae};
  std::size_t pos = 0;
  for (std::uint32_t field : fields) {
    out[pos++] = static_cast<std::uint8_t>(field >> 24);
    out[pos++] = static_cast<std::uint8_t>(field >> 16);
    out[pos++] = static_cast<std::uint8_t>(field >> 8);
    out[pos++] = static_cast<std::uint8_t>(field);
  }
  return out;
}

inline SampleRecord deserialize_sample(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kSampleWireSize) {
    throw std::invalid_argument("deserialize_sample: payload is not 20 bytes");
  }
  auto read_u32 = [&](std::size_t at) {
    return (static_cast<std::uint32_t>(bytes[at]) << 24) |
           (static_cast<std::uint32_t>(bytes[at + 1]) << 16) |
           (static_cast<std::uint32_t>(bytes[at + 2]) << 8) |
           static_cast<std::uint32_t>(bytes[at + 3]);
  };
  SampleRecord record;
  record.counter = read_u32(0);
  record.no2_we = read_u32(4);
  record.no2_ae = read_u32(8);
  record.o3_we = read_u32(12);
  record.o3_ae = read_u32(16);
  return record;
}

}  // namespace aqsim
