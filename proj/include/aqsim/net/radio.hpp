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
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "aqsim/net/rpl_types.hpp"
#include "aqsim/sim/engine.hpp"

namespace aqsim {

/// Per-directed-link loss model. Links are installed symmetrically by default
/// with per-direction override available.
struct LinkModel {
  double loss = 0.0;       // Bernoulli loss per transmission attempt
  SimTime latency = 5;     // ms, covers serialization at Sub-1 GHz rates
  int max_retx = 3;        // link-layer retransmissions after the first attempt
};

struct LinkStats {
  std::uint64_t frames_sent = 0;
  std::uint64_t frames_delivered = 0;
  std::uint64_t frames_dropped = 0;
  std::uint64_t attempts = 0;
  std::uint64_t attempt_losses = 0;
};

/// Lossy shared medium connecting node radios. Unicast frames get per-hop
/// acknowledgment with retransmission; broadcasts are single-attempt per
/// neighbor. All loss draws come from per-directed-link RNG streams, so the
/// medium is deterministic under a fixed seed regardless of node count.
class RadioMedium {
 public:
  struct Receiver {
    std::function<void(NodeId src, std::vector<std::uint8_t>&&)> on_bytes;
    std::function<void(NodeId src, const RplMessage&)> on_control;
  };

  explicit RadioMedium(Engine& engine) : engine_(engine) {}

  void add_link(NodeId a, NodeId b, LinkModel model) {
    links_[{a, b}] = model;
    links_[{b, a}] = model;
  }

  void set_link_oneway(NodeId from, NodeId to, LinkModel model) {
    links_[{from, to}] = model;
  }

  /// Severs both directions. In-flight deliveries already scheduled still
  /// arrive; nothing new crosses the gap.
  void remove_link(NodeId a, NodeId b) {
    links_.erase({a, b});
    links_.erase({b, a});
  }

  bool has_link(NodeId from, NodeId to) const {
    return links_.count({from, to}) != 0;
  }

  std::vector<NodeId> neighbors(NodeId node) const {
    std::vector<NodeId> out;
    for (const auto& [key, model] : links_) {
      if (key.first == node) out.push_back(key.second);
    }
    return out;  // map order keeps this sorted
  }

  void set_receiver(NodeId node, Receiver receiver) {
    receivers_[node] = std::move(receiver);
  }

  /// Unicast datagram bytes with link-layer retransmission. on_drop, when
  /// set, fires if every attempt is lost (or no link exists).
  void send_bytes(NodeId src, NodeId dst, std::vector<std::uint8_t> payload,
                  std::function<void()> on_drop = nullptr) {
    send_unicast(
        src, dst,
        [this, src, dst, payload = std::move(payload)]() mutable {
          auto it = receivers_.find(dst);
          if (it != receivers_.end() && it->second.on_bytes) {
            it->second.on_bytes(src, std::move(payload));
          }
        },
        std::move(on_drop));
  }

  void send_control_unicast(NodeId src, NodeId dst, RplMessage msg,
                            std::function<void()> on_drop = nullptr) {
    send_unicast(
        src, dst,
        [this, src, dst, msg]() {
          auto it = receivers_.find(dst);
          if (it != receivers_.end() && it->second.on_control) {
            it->second.on_control(src, msg);
          }
        },
        std::move(on_drop));
  }

  /// Broadcast control message: one attempt per in-range neighbor, no ack.
  void broadcast_control(NodeId src, const RplMessage& msg) {
    for (NodeId neighbor : neighbors(src)) {
      const LinkModel& link = links_.at({src, neighbor});
      LinkStats& stats = stats_[{src, neighbor}];
      ++stats.frames_sent;
      ++stats.attempts;
      if (link_rng(src, neighbor).bernoulli(link.loss)) {
        ++stats.attempt_losses;
        ++stats.frames_dropped;
        continue;
      }
      ++stats.frames_delivered;
      engine_.schedule_in(link.latency, src, [this, src, neighbor, msg]() {
        auto it = receivers_.find(neighbor);
        if (it != receivers_.end() && it->second.on_control) {
          it->second.on_control(src, msg);
        }
      });
    }
  }

  const LinkStats& stats(NodeId from, NodeId to) const {
    static const LinkStats kEmpty;
    auto it = stats_.find({from, to});
    return it == stats_.end() ? kEmpty : it->second;
  }

  const std::map<std::pair<NodeId, NodeId>, LinkStats>& all_stats() const {
    return stats_;
  }

  LinkStats totals() const {
    LinkStats sum;
    for (const auto& [key, s] : stats_) {
      sum.frames_sent += s.frames_sent;
      sum.frames_delivered += s.frames_delivered;
      sum.frames_dropped += s.frames_dropped;
      sum.attempts += s.attempts;
      sum.attempt_losses += s.attempt_losses;
    }
    return sum;
  }

 private:
  using LinkKey = std::pair<NodeId, NodeId>;

  RngStream& link_rng(NodeId from, NodeId to) {
    return engine_.rng(stream_key(StreamDomain::kLink, from, to));
  }

  void send_unicast(NodeId src, NodeId dst, std::function<void()> deliver,
                    std::function<void()> on_drop) {
    auto link_it = links_.find({src, dst});
    if (link_it == links_.end()) {
      if (on_drop) on_drop();
      return;
    }
    ++stats_[{src, dst}].frames_sent;
    attempt(src, dst, 0, std::move(deliver), std::move(on_drop));
  }

  void attempt(NodeId src, NodeId dst, int attempt_index,
               std::function<void()> deliver, std::function<void()> on_drop) {
    auto link_it = links_.find({src, dst});
    if (link_it == links_.end()) {
      // Link severed mid-retransmission: the frame is lost.
      ++stats_[{src, dst}].frames_dropped;
      if (on_drop) on_drop();
      return;
    }
    const LinkModel& link = link_it->second;
    LinkStats& stats = stats_[{src, dst}];
    ++stats.attempts;
    if (!link_rng(src, dst).bernoulli(link.loss)) {
      ++stats.frames_delivered;
      engine_.schedule_in(link.latency, src, std::move(deliver));
      return;
    }
    ++stats.attempt_losses;
    if (attempt_index >= link.max_retx) {
      ++stats.frames_dropped;
      if (on_drop) on_drop();
      return;
    }
    // Next attempt after the ack window (one round trip) expires.
    engine_.schedule_in(2 * link.latency, src,
                        [this, src, dst, attempt_index, deliver = std::move(deliver),
                         on_drop = std::move(on_drop)]() mutable {
                          attempt(src, dst, attempt_index + 1, std::move(deliver),
                                  std::move(on_drop));
                        });
  }

  Engine& engine_;
  std::map<LinkKey, LinkModel> links_;
  std::map<LinkKey, LinkStats> stats_;
  std::map<NodeId, Receiver> receivers_;
};

}  // namespace aqsim
