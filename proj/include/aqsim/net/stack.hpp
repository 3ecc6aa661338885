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
#include <functional>
#include <utility>
#include <vector>

#include "aqsim/net/datagram.hpp"
#include "aqsim/net/lowpan.hpp"
#include "aqsim/net/radio.hpp"
#include "aqsim/net/rpl.hpp"
#include "aqsim/sim/engine.hpp"

namespace aqsim {

/// Route-over forwarding plane of one node: datagrams are fragmented onto
/// the radio toward the preferred parent, reassembled per hop, and either
/// terminated here or re-fragmented upward with a fresh tag. Application
/// payloads pass through byte-identical.
class NodeStack {
 public:
  struct Stats {
    std::uint64_t datagrams_sent = 0;
    std::uint64_t datagrams_forwarded = 0;
    std::uint64_t datagrams_delivered = 0;
    std::uint64_t no_route_drops = 0;
    std::uint64_t malformed_datagrams = 0;
    std::uint64_t fragments_sent = 0;
  };

  using DeliverHook = std::function<void(Datagram&&)>;

  NodeStack(Engine& engine, RadioMedium& radio, RplNode& rpl)
      : engine_(engine), radio_(radio), rpl_(rpl), id_(rpl.id()) {
    radio_.set_receiver(
        id_,
        RadioMedium::Receiver{
            [this](NodeId src, std::vector<std::uint8_t>&& bytes) {
              on_frame(src, std::move(bytes));
            },
            [this](NodeId src, const RplMessage& msg) {
              rpl_.handle_control(src, msg);
            }});
  }

  NodeStack(const NodeStack&) = delete;
  NodeStack& operator=(const NodeStack&) = delete;

  void set_deliver_hook(DeliverHook hook) { deliver_ = std::move(hook); }

  NodeId id() const { return id_; }
  const Stats& stats() const { return stats_; }
  const Reassembler& reassembler() const { return reassembler_; }

  /// Submits a locally originated datagram for upward routing. Returns false
  /// when the node has no route (detached, or is the root itself).
  bool send_datagram(const Datagram& datagram) {
    const auto next = rpl_.next_hop_up();
    if (!next) return false;
    transmit(encode_datagram(datagram), *next);
    ++stats_.datagrams_sent;
    return true;
  }

  void on_frame(NodeId src, std::vector<std::uint8_t>&& bytes) {
    auto completed = reassembler_.feed(src, bytes, engine_.now());
    if (!completed) return;
    auto decoded = decode_datagram(*completed);
    if (!decoded) {
      ++stats_.malformed_datagrams;
      return;
    }
    route(std::move(*decoded), std::move(*completed));
  }

 private:
  void route(Datagram&& datagram, std::vector<std::uint8_t>&& raw) {
    if (rpl_.is_root() || datagram.dst == id_) {
      ++stats_.datagrams_delivered;
      if (deliver_) deliver_(std::move(datagram));
      return;
    }
    const auto next = rpl_.next_hop_up();
    if (!next) {
      ++stats_.no_route_drops;
      return;
    }
    transmit(raw, *next);
    ++stats_.datagrams_forwarded;
  }

  void transmit(const std::vector<std::uint8_t>& bytes, NodeId next_hop) {
    const auto fragments = fragment(bytes, kFramePayloadBudget, next_tag_++);
    stats_.fragments_sent += fragments.size();
    for (const auto& frag : fragments) {
      radio_.send_bytes(id_, next_hop, frag);
    }
  }

  Engine& engine_;
  RadioMedium& radio_;
  RplNode& rpl_;
  const NodeId id_;
  Reassembler reassembler_;
  DeliverHook deliver_;
  std::uint16_t next_tag_ = 0;
  Stats stats_;
};

}  // namespace aqsim
