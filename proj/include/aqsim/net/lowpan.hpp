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
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "aqsim/sim/time.hpp"
#include "aqsim/util/bytes.hpp"

namespace aqsim {

// IEEE 802.15.4 frame budget. Header compression is modeled as a fixed
// overhead; fragmentation below is bit-exact.
inline constexpr std::size_t kFrameMaxBytes = 127;
inline constexpr std::size_t kMacOverheadBytes = 23;
inline constexpr std::size_t kFramePayloadBudget = kFrameMaxBytes - kMacOverheadBytes;
inline constexpr std::size_t kMaxDatagramSize = 2047;  // 11-bit datagram_size

inline constexpr std::size_t kFrag1HeaderSize = 4;
inline constexpr std::size_t kFragnHeaderSize = 5;
inline constexpr std::uint8_t kFrag1Dispatch = 0xC0;  // 11000xxx
inline constexpr std::uint8_t kFragnDispatch = 0xE0;  // 11100xxx
// Unfragmented datagrams ride behind a one-byte dispatch so arbitrary payload
// bytes can never be mistaken for a fragment header.
inline constexpr std::uint8_t kUnfragmentedDispatch = 0x41;

struct FragmentHeader {
  std::uint16_t datagram_size = 0;  // 11-bit
  std::uint16_t datagram_tag = 0;
  std::uint8_t datagram_offset = 0;  // units of 8 bytes; FRAGN only
  bool is_fragn = false;
};

inline bool is_fragment_dispatch(std::uint8_t first_byte) {
  return (first_byte & 0xF8) == kFrag1Dispatch || (first_byte & 0xF8) == kFragnDispatch;
}

inline void encode_fragment_header(std::vector<std::uint8_t>& out,
                                   const FragmentHeader& header) {
  const std::uint8_t dispatch = header.is_fragn ? kFragnDispatch : kFrag1Dispatch;
  out.push_back(static_cast<std::uint8_t>(dispatch | ((header.datagram_size >> 8) & 0x07)));
  out.push_back(static_cast<std::uint8_t>(header.datagram_size & 0xFF));
  put_u16_be(out, header.datagram_tag);
  if (header.is_fragn) out.push_back(header.datagram_offset);
}

inline std::optional<FragmentHeader> decode_fragment_header(
    std::span<const std::uint8_t> bytes, std::size_t& header_size) {
  if (bytes.size() < kFrag1HeaderSize) return std::nullopt;
  FragmentHeader header;
  const std::uint8_t dispatch = bytes[0] & 0xF8;
  if (dispatch == kFrag1Dispatch) {
    header.is_fragn = false;
    header_size = kFrag1HeaderSize;
  } else if (dispatch == kFragnDispatch) {
    header.is_fragn = true;
    header_size = kFragnHeaderSize;
    if (bytes.size() < kFragnHeaderSize) return std::nullopt;
  } else {
    return std::nullopt;
  }
  header.datagram_size =
      static_cast<std::uint16_t>(((bytes[0] & 0x07) << 8) | bytes[1]);
  header.datagram_tag = get_u16_be(bytes.data() + 2);
  if (header.is_fragn) header.datagram_offset = bytes[4];
  return header;
}

/// Splits a datagram into link payloads of at most mtu_payload bytes each.
/// A datagram that fits a single frame is passed through unfragmented;
/// otherwise a FRAG1 plus FRAGN series shares a fresh datagram_tag and every
/// non-final fragment carries a multiple of 8 data bytes.
inline std::vector<std::vector<std::uint8_t>> fragment(
    std::span<const std::uint8_t> datagram, std::size_t mtu_payload,
    std::uint16_t datagram_tag) {
  if (datagram.size() > kMaxDatagramSize) {
    throw std::invalid_argument("fragment: datagram exceeds 2047 bytes");
  }
  if (datagram.empty()) {
    throw std::invalid_argument("fragment: empty datagram");
  }
  std::vector<std::vector<std::uint8_t>> out;
  if (datagram.size() + 1 <= mtu_payload) {
    std::vector<std::uint8_t> frame;
    frame.reserve(datagram.size() + 1);
    frame.push_back(kUnfragmentedDispatch);
    frame.insert(frame.end(), datagram.begin(), datagram.end());
    out.push_back(std::move(frame));
    return out;
  }
  if (mtu_payload < kFragnHeaderSize + 8) {
    throw std::invalid_argument("fragment: mtu_payload too small to fragment");
  }

  const std::uint16_t size = static_cast<std::uint16_t>(datagram.size());
  std::size_t offset = 0;

  const std::size_t frag1_data = ((mtu_payload - kFrag1HeaderSize) / 8) * 8;
  {
    std::vector<std::uint8_t> frame;
    encode_fragment_header(frame, {size, datagram_tag, 0, false});
    frame.insert(frame.end(), datagram.begin(), datagram.begin() + frag1_data);
    out.push_back(std::move(frame));
    offset = frag1_data;
  }
  while (offset < datagram.size()) {
    const std::size_t remaining = datagram.size() - offset;
    std::size_t take;
    if (remaining <= mtu_payload - kFragnHeaderSize) {
      take = remaining;  // final fragment, no 8-byte rounding
    } else {
      take = ((mtu_payload - kFragnHeaderSize) / 8) * 8;
    }
    std::vector<std::uint8_t> frame;
    encode_fragment_header(
        frame, {size, datagram_tag, static_cast<std::uint8_t>(offset / 8), true});
    frame.insert(frame.end(), datagram.begin() + offset,
                 datagram.begin() + offset + take);
    out.push_back(std::move(frame));
    offset += take;
  }
  return out;
}

/// Per-node reassembly buffers keyed by (source, datagram_tag). Duplicate or
/// overlapping offsets are ignored idempotently; a buffer that stays
/// incomplete past the timeout is discarded and counted.
class Reassembler {
 public:
  explicit Reassembler(SimTime timeout = 10 * kSecond) : timeout_(timeout) {}

  /// Feeds one link payload from `src`. Returns the complete datagram once
  /// all fragments are present; unfragmented payloads complete immediately.
  std::optional<std::vector<std::uint8_t>> feed(std::uint16_t src,
                                                std::span<const std::uint8_t> bytes,
                                                SimTime now) {
    purge(now);
    if (bytes.empty()) return std::nullopt;
    if (bytes[0] == kUnfragmentedDispatch) {
      return std::vector<std::uint8_t>(bytes.begin() + 1, bytes.end());
    }
    if (!is_fragment_dispatch(bytes[0])) {
      ++malformed_;
      return std::nullopt;
    }
    std::size_t header_size = 0;
    const auto header = decode_fragment_header(bytes, header_size);
    if (!header) {
      ++malformed_;
      return std::nullopt;
    }
    const auto data = bytes.subspan(header_size);
    const Key key{src, header->datagram_tag};
    auto it = pending_.find(key);
    if (it == pending_.end()) {
      Partial partial;
      partial.bytes.assign(header->datagram_size, 0);
      partial.have.assign(header->datagram_size, false);
      partial.expires_at = now + timeout_;
      it = pending_.emplace(key, std::move(partial)).first;
    }
    Partial& partial = it->second;
    if (partial.bytes.size() != header->datagram_size) {
      // Tag reuse with a different size: treat as a fresh datagram.
      partial.bytes.assign(header->datagram_size, 0);
      partial.have.assign(header->datagram_size, false);
      partial.expires_at = now + timeout_;
    }
    const std::size_t start = header->is_fragn ? header->datagram_offset * 8u : 0u;
    if (start + data.size() > partial.bytes.size()) {
      ++malformed_;
      return std::nullopt;
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
      partial.bytes[start + i] = data[i];
      partial.have[start + i] = true;
    }
    for (bool have : partial.have) {
      if (!have) return std::nullopt;
    }
    std::vector<std::uint8_t> done = std::move(partial.bytes);
    pending_.erase(it);
    return done;
  }

  /// Drops every partial datagram whose timeout has elapsed.
  void purge(SimTime now) {
    for (auto it = pending_.begin(); it != pending_.end();) {
      if (it->second.expires_at <= now) {
        ++timed_out_;
        it = pending_.erase(it);
      } else {
        ++it;
      }
    }
  }

  std::size_t pending_count() const { return pending_.size(); }
  std::size_t timed_out_count() const { return timed_out_; }
  std::size_t malformed_count() const { return malformed_; }

 private:
  using Key = std::pair<std::uint16_t, std::uint16_t>;

  struct Partial {
    std::vector<std::uint8_t> bytes;
    std::vector<bool> have;
    SimTime expires_at = 0;
  };

  SimTime timeout_;
  std::map<Key, Partial> pending_;
  std::size_t timed_out_ = 0;
  std::size_t malformed_ = 0;
};

}  // namespace aqsim
