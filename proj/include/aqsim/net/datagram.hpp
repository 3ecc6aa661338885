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
#include <span>
#include <vector>

#include "aqsim/util/bytes.hpp"

namespace aqsim {

// The mesh runs a single /64; addresses inside the simulator are the 16-bit
// interface suffix. The gateway host owns a reserved suffix outside the WSN
// node id space.
inline constexpr std::uint16_t kGatewaySuffix = 0xFFFE;
inline constexpr std::uint16_t kIngestPort = 5000;

/// UDP/IPv6 datagram with the compressed header modeled as a fixed 13-byte
/// layout (addresses elided down to 16-bit suffixes, best-case compression).
struct Datagram {
  std::uint16_t src = 0;
  std::uint16_t dst = 0;
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  std::vector<std::uint8_t> payload;

  bool operator==(const Datagram&) const = default;
};

inline constexpr std::size_t kCompressedHeaderSize = 13;
inline constexpr std::uint8_t kDatagramDispatch = 0x7A;

inline std::uint16_t payload_checksum(std::span<const std::uint8_t> payload) {
  std::uint32_t sum = 0;
  for (std::uint8_t byte : payload) sum += byte;
  while (sum >> 16) sum = (sum & 0xFFFF) + (sum >> 16);
  return static_cast<std::uint16_t>(sum);
}

inline std::vector<std::uint8_t> encode_datagram(const Datagram& dgram) {
  std::vector<std::uint8_t> out;
  out.reserve(kCompressedHeaderSize + dgram.payload.size());
  out.push_back(kDatagramDispatch);
  put_u16_be(out, dgram.src);
  put_u16_be(out, dgram.dst);
  put_u16_be(out, dgram.src_port);
  put_u16_be(out, dgram.dst_port);
  put_u16_be(out, static_cast<std::uint16_t>(dgram.payload.size()));
  put_u16_be(out, payload_checksum(dgram.payload));
  out.insert(out.end(), dgram.payload.begin(), dgram.payload.end());
  return out;
}

/// Returns nullopt for anything that does not parse back cleanly: wrong
/// dispatch, truncated header, length mismatch, or checksum failure.
inline std::optional<Datagram> decode_datagram(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kCompressedHeaderSize) return std::nullopt;
  if (bytes[0] != kDatagramDispatch) return std::nullopt;
  Datagram dgram;
  dgram.src = get_u16_be(bytes.data() + 1);
  dgram.dst = get_u16_be(bytes.data() + 3);
  dgram.src_port = get_u16_be(bytes.data() + 5);
  dgram.dst_port = get_u16_be(bytes.data() + 7);
  const std::uint16_t length = get_u16_be(bytes.data() + 9);
  const std::uint16_t checksum = get_u16_be(bytes.data() + 11);
  if (bytes.size() != kCompressedHeaderSize + length) return std::nullopt;
  dgram.payload.assign(bytes.begin() + kCompressedHeaderSize, bytes.end());
  if (payload_checksum(dgram.payload) != checksum) return std::nullopt;
  return dgram;
}

}  // namespace aqsim
