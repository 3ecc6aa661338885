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

#include <cstdint>
#include <optional>
#include <vector>

#include "aqsim/util/bytes.hpp"

namespace aqsim {

/// Control framing on the serial line, inside SLIP: one type byte, then the
/// body. Type 0x00 carries an encoded IP datagram; type 0x01 announces the
/// routable prefix (8-byte big-endian body).
constexpr std::uint8_t kSerialTypeData = 0x00;
constexpr std::uint8_t kSerialTypePrefix = 0x01;

struct SerialMessage {
  std::uint8_t type = 0;
  std::vector<std::uint8_t> body;
};

inline std::vector<std::uint8_t> build_data_message(
    const std::vector<std::uint8_t>& datagram_bytes) {
  std::vector<std::uint8_t> out;
  out.reserve(1 + datagram_bytes.size());
  out.push_back(kSerialTypeData);
  out.insert(out.end(), datagram_bytes.begin(), datagram_bytes.end());
  return out;
}

inline std::vector<std::uint8_t> build_prefix_message(std::uint64_t prefix) {
  std::vector<std::uint8_t> out;
  out.reserve(9);
  out.push_back(kSerialTypePrefix);
  put_u64_be(out, prefix);
  return out;
}

/// Splits type byte from body; rejects empty payloads, unknown types, and
/// prefix bodies of the wrong size.
inline std::optional<SerialMessage> parse_serial_message(
    const std::vector<std::uint8_t>& payload) {
  if (payload.empty()) return std::nullopt;
  SerialMessage msg;
  msg.type = payload[0];
  msg.body.assign(payload.begin() + 1, payload.end());
  if (msg.type == kSerialTypePrefix && msg.body.size() != 8) {
    return std::nullopt;
  }
  if (msg.type != kSerialTypeData && msg.type != kSerialTypePrefix) {
    return std::nullopt;
  }
  return msg;
}

}  // namespace aqsim
