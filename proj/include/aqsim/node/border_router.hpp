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
#include <utility>

#include "aqsim/net/stack.hpp"
#include "aqsim/serial/framing.hpp"
#include "aqsim/serial/serial_line.hpp"
#include "aqsim/serial/slip.hpp"

namespace aqsim {

/// The DODAG root's host-facing half: datagrams terminating at the root and
/// addressed to the gateway are SLIP-framed onto the serial line; anything
/// else is dropped as a misroute. The reverse direction carries prefix
/// announcements from the gateway, which (re)initialize the root.
class BorderRouter {
 public:
  struct Stats {
    std::uint64_t forwarded = 0;
    std::uint64_t misroute_drops = 0;
    std::uint64_t overflow_drops = 0;
    std::uint64_t prefix_announcements = 0;
    std::uint64_t downlink_ignored = 0;
    std::uint64_t malformed_serial = 0;
  };

  BorderRouter(NodeStack& stack, RplNode& root, SerialLine& line,
               SerialSide side)
      : root_(root), line_(line), side_(side) {
    stack.set_deliver_hook(
        [this](Datagram&& datagram) { forward_up(std::move(datagram)); });
    line_.set_sink(side_, [this](std::vector<std::uint8_t>&& bytes) {
      on_serial_bytes(bytes);
    });
  }

  BorderRouter(const BorderRouter&) = delete;
  BorderRouter& operator=(const BorderRouter&) = delete;

  const Stats& stats() const { return stats_; }
  std::uint64_t serial_malformed_frames() const {
    return decoder_.malformed_count();
  }

  void forward_up(Datagram&& datagram) {
    if (datagram.dst != kGatewaySuffix) {
      ++stats_.misroute_drops;
      return;
    }
    const auto encoded =
        slip_encode(build_data_message(encode_datagram(datagram)));
    if (line_.send(side_, encoded)) {
      ++stats_.forwarded;
    } else {
      ++stats_.overflow_drops;
    }
  }

  void accept_prefix(std::uint64_t prefix) {
    ++stats_.prefix_announcements;
    root_.root_initialize(prefix);
  }

 private:
  void on_serial_bytes(const std::vector<std::uint8_t>& bytes) {
    for (const auto& payload : decoder_.feed(bytes)) {
      const auto msg = parse_serial_message(payload);
      if (!msg) {
        ++stats_.malformed_serial;
        continue;
      }
      if (msg->type == kSerialTypePrefix) {
        accept_prefix(get_u64_be(msg->body.data()));
      } else {
        ++stats_.downlink_ignored;  // no application downlink exists
      }
    }
  }

  RplNode& root_;
  SerialLine& line_;
  const SerialSide side_;
  SlipDecoder decoder_;
  Stats stats_;
};

}  // namespace aqsim
