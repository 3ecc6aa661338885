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

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "aqsim/net/radio.hpp"
#include "aqsim/net/rpl_types.hpp"
#include "aqsim/sim/engine.hpp"

namespace aqsim {

class RplNode;

/// Shared view over every node's DODAG state. Rank updates and detachments
/// cascade through the parent-pointer tree synchronously, so the rank chain
/// from any attached node to the root is exact at every simulation instant
/// (the distributed protocol would repair the same state a few DIOs later).
/// Also the home of the loop-freedom validator and convergence bookkeeping.
class DodagRegistry {
 public:
  void register_node(RplNode* node);

  RplNode* find(NodeId id) const {
    auto it = nodes_.find(id);
    return it == nodes_.end() ? nullptr : it->second;
  }

  std::uint16_t live_rank(NodeId id) const;

  // Parent-pointer index maintenance; called by RplNode on state changes.
  void parent_link_changed(NodeId child, std::optional<NodeId> old_parent,
                           std::optional<NodeId> new_parent) {
    if (old_parent) children_[*old_parent].erase(child);
    if (new_parent) children_[*new_parent].insert(child);
    dirty_ = true;
  }

  void cascade_rank_update(NodeId node);
  void detach_subtree(NodeId node);

  /// True when `ancestor` sits on `node`'s current parent chain. Parent
  /// selection vetoes such candidates: adopting a node from the chooser's
  /// own subtree would close a cycle and count ranks toward infinity.
  bool chain_passes_through(NodeId node, NodeId ancestor) const;

  void note_rank_change(NodeId node, std::uint16_t old_rank,
                        std::uint16_t new_rank, SimTime now) {
    dirty_ = true;
    if (old_rank == kInfiniteRank && new_rank != kInfiniteRank &&
        !first_finite_.count(node)) {
      first_finite_[node] = now;
    }
  }

  void note_root_initialized(SimTime now) {
    if (!root_init_time_) root_init_time_ = now;
    dirty_ = true;
  }

  /// Walks every attached node's parent chain: ranks must strictly decrease
  /// in steps of RANK_STEP and terminate at the root within node-count hops.
  /// Returns human-readable violations; empty means the DODAG is consistent.
  std::vector<std::string> validate() const;

  /// True when some event since the last check touched DODAG state.
  bool consume_dirty() {
    const bool was = dirty_;
    dirty_ = false;
    return was;
  }

  const std::map<NodeId, SimTime>& first_finite_times() const {
    return first_finite_;
  }
  std::optional<SimTime> root_init_time() const { return root_init_time_; }

  std::size_t attached_count() const;
  std::size_t node_count() const { return nodes_.size(); }

 private:
  std::map<NodeId, RplNode*> nodes_;
  std::map<NodeId, std::set<NodeId>> children_;
  std::map<NodeId, SimTime> first_finite_;
  std::optional<SimTime> root_init_time_;
  bool dirty_ = false;
};

/// One node's slice of the routing protocol: candidate-parent table fed by
/// DIOs, trickle-style DIO emission (1 s doubling to a 60 s cap, reset on
/// inconsistency), DIS solicitation while detached, parent hold timer of
/// three advertised DIO periods, and DAO reporting toward the root.
class RplNode {
 public:
  struct Stats {
    std::uint64_t dio_sent = 0;
    std::uint64_t dio_received = 0;
    std::uint64_t dis_sent = 0;
    std::uint64_t dao_sent = 0;
    std::uint64_t dao_forwarded = 0;
    std::uint64_t parent_changes = 0;
    std::uint64_t parent_losses = 0;
    std::uint64_t stale_version_ignored = 0;
  };

  static constexpr SimTime kTrickleMin = 1 * kSecond;
  static constexpr SimTime kTrickleMax = 60 * kSecond;
  static constexpr int kParentHoldPeriods = 3;
  static constexpr SimTime kDisInterval = 5 * kSecond;

  /// Time in which the parent would emit its next kParentHoldPeriods DIOs,
  /// starting from the advertised gap and doubling toward the cap. Surviving
  /// that window without hearing the parent means it is gone.
  static SimTime parent_hold_duration(SimTime advertised_period) {
    SimTime gap = std::clamp<SimTime>(advertised_period, kTrickleMin, kTrickleMax);
    SimTime hold = 0;
    for (int i = 0; i < kParentHoldPeriods; ++i) {
      hold += gap;
      gap = std::min<SimTime>(gap * 2, kTrickleMax);
    }
    return hold;
  }

  RplNode(Engine& engine, RadioMedium& radio, DodagRegistry& registry, NodeId id,
          bool is_root)
      : engine_(engine), radio_(radio), registry_(registry), is_root_(is_root) {
    state_.node = id;
    if (is_root_) state_.rank = kMinRank;
    registry_.register_node(this);
  }

  RplNode(const RplNode&) = delete;
  RplNode& operator=(const RplNode&) = delete;

  NodeId id() const { return state_.node; }
  bool is_root() const { return is_root_; }
  const DodagState& state() const { return state_; }
  const Stats& stats() const { return stats_; }

  /// Root: origin -> delivering neighbor, learned from DAOs.
  const std::map<NodeId, NodeId>& dao_reachability() const { return dao_table_; }

  /// Starts DIS solicitation for non-root nodes. Roots stay quiet until a
  /// prefix arrives over the serial side.
  void boot() {
    if (is_root_) return;
    const SimTime jitter = rng().uniform_below(kSecond);
    dis_timer_ = engine_.schedule_in(jitter, state_.node, [this] { dis_tick(); });
  }

  /// Installs (or replaces) the routable prefix at the root. The first call
  /// starts version 1; a different prefix bumps the version and triggers
  /// re-dissemination. Re-installing the same prefix is a no-op.
  void root_initialize(std::uint64_t prefix) {
    if (!is_root_) throw std::logic_error("root_initialize on non-root node");
    if (state_.prefix && *state_.prefix == prefix) return;
    state_.prefix = prefix;
    state_.version += 1;
    state_.rank = kMinRank;
    registry_.note_root_initialized(engine_.now());
    registry_.note_rank_change(state_.node, kInfiniteRank, state_.rank,
                               engine_.now());
    reset_trickle();
  }

  void handle_control(NodeId from, const RplMessage& msg) {
    switch (msg.kind) {
      case RplMessageKind::kDio:
        ++stats_.dio_received;
        handle_dio(from, msg);
        break;
      case RplMessageKind::kDis:
        handle_dis(from);
        break;
      case RplMessageKind::kDao:
        handle_dao(from, msg);
        break;
    }
  }

  /// Upward default route: the preferred parent. Roots and detached nodes
  /// have no radio-side route (the root forwards to the serial side).
  std::optional<NodeId> next_hop_up() const {
    if (is_root_ || !state_.joined()) return std::nullopt;
    return state_.preferred_parent;
  }

 private:
  friend class DodagRegistry;

  struct Candidate {
    std::uint16_t rank = kInfiniteRank;
    std::uint32_t version = 0;
    SimTime last_heard = 0;
    SimTime period = kTrickleMin;
  };

  RngStream& rng() {
    return engine_.rng(stream_key(StreamDomain::kNode, state_.node, 1));
  }

  void handle_dio(NodeId from, const RplMessage& msg) {
    if (is_root_) return;
    if (msg.version < state_.version) {
      ++stats_.stale_version_ignored;
      return;
    }
    if (msg.rank == kInfiniteRank) {
      // Poison: the sender left the DODAG.
      candidates_.erase(from);
      if (state_.preferred_parent && *state_.preferred_parent == from) {
        on_parent_lost();
      }
      return;
    }
    if (msg.version > state_.version) {
      // New DODAG iteration: drop stale-candidate knowledge and migrate.
      state_.version = msg.version;
      state_.prefix = msg.prefix;
      for (auto it = candidates_.begin(); it != candidates_.end();) {
        it = it->second.version < msg.version ? candidates_.erase(it) : ++it;
      }
      version_migrated_ = true;
    }
    candidates_[from] =
        Candidate{msg.rank, msg.version, engine_.now(), msg.dio_period};
    if (msg.prefix && state_.joined()) state_.prefix = msg.prefix;
    evaluate_parent();
    if (version_migrated_) {
      version_migrated_ = false;
      reset_trickle();
      send_dao();
    }
  }

  void handle_dis(NodeId from) {
    // Detached nodes stay silent, and so does a root that has nothing to
    // advertise yet: a reply before the prefix arrives would seed version 0.
    if (is_root_ ? !state_.prefix.has_value() : !state_.joined()) return;
    radio_.send_control_unicast(state_.node, from, make_dio());
  }

  void handle_dao(NodeId from, const RplMessage& msg) {
    if (is_root_) {
      dao_table_[msg.dao_origin] = from;
      return;
    }
    if (state_.preferred_parent) {
      RplMessage fwd = msg;
      fwd.sender = state_.node;
      radio_.send_control_unicast(state_.node, *state_.preferred_parent, fwd);
      ++stats_.dao_forwarded;
    }
  }

  /// Preferred parent is the candidate minimizing (current rank, node id).
  /// Adoption reads the candidate's live rank so the parent chain arithmetic
  /// never goes stale.
  void evaluate_parent() {
    std::optional<NodeId> best;
    std::uint16_t best_rank = kInfiniteRank;
    for (auto it = candidates_.begin(); it != candidates_.end();) {
      const auto& [id, cand] = *it;
      const SimTime hold = parent_hold_duration(cand.period);
      if (cand.version != state_.version ||
          engine_.now() > cand.last_heard + hold) {
        it = candidates_.erase(it);
        continue;
      }
      const std::uint16_t live = registry_.live_rank(id);
      if (live != kInfiniteRank &&
          !registry_.chain_passes_through(id, state_.node) &&
          (live < best_rank || (live == best_rank && (!best || id < *best)))) {
        best = id;
        best_rank = live;
      }
      ++it;
    }
    if (!best) return;
    const std::uint16_t new_rank = static_cast<std::uint16_t>(
        std::min<std::uint32_t>(best_rank + kRankStep, kInfiniteRank));
    if (new_rank == kInfiniteRank) return;
    if (state_.preferred_parent == best && state_.rank == new_rank) {
      refresh_parent_hold();
      return;
    }
    adopt_parent(*best, new_rank);
  }

  void adopt_parent(NodeId parent, std::uint16_t new_rank) {
    const auto old_parent = state_.preferred_parent;
    state_.preferred_parent = parent;
    registry_.parent_link_changed(state_.node, old_parent, parent);
    ++stats_.parent_changes;
    set_rank(new_rank);
    refresh_parent_hold();
    reset_trickle();
    send_dao();
  }

  void set_rank(std::uint16_t new_rank) {
    if (state_.rank == new_rank) return;
    const std::uint16_t old = state_.rank;
    state_.rank = new_rank;
    registry_.note_rank_change(state_.node, old, new_rank, engine_.now());
    registry_.cascade_rank_update(state_.node);
  }

  /// Called by the registry when this node's parent rank moved: keep the
  /// chain arithmetic exact, propagate to descendants, and announce.
  void apply_parent_rank(std::uint16_t parent_rank) {
    const std::uint32_t widened = parent_rank + kRankStep;
    if (widened >= kInfiniteRank) {
      registry_.detach_subtree(state_.node);
      return;
    }
    const std::uint16_t next = static_cast<std::uint16_t>(widened);
    if (next == state_.rank) return;
    set_rank(next);
    reset_trickle();
    send_dao();
  }

  void on_parent_lost() {
    ++stats_.parent_losses;
    if (state_.preferred_parent) candidates_.erase(*state_.preferred_parent);
    registry_.detach_subtree(state_.node);
    evaluate_parent();  // re-attach immediately if another candidate survives
  }

  /// Registry-driven detachment: rank goes infinite, the candidate table is
  /// left intact (minus the lost parent), poison is broadcast, and DIS
  /// solicitation resumes.
  void detach_self() {
    const std::uint16_t old = state_.rank;
    const auto old_parent = state_.preferred_parent;
    state_.preferred_parent.reset();
    if (old_parent) registry_.parent_link_changed(state_.node, old_parent, std::nullopt);
    state_.rank = kInfiniteRank;
    registry_.note_rank_change(state_.node, old, kInfiniteRank, engine_.now());
    cancel_timer(hold_timer_);
    cancel_timer(trickle_timer_);
    trickle_interval_ = 0;
    RplMessage poison = make_dio();
    poison.rank = kInfiniteRank;
    radio_.broadcast_control(state_.node, poison);
    ++stats_.dio_sent;
    send_dis();
    if (!dis_timer_) {
      dis_timer_ =
          engine_.schedule_in(kDisInterval, state_.node, [this] { dis_tick(); });
    }
  }

  // --- trickle ---

  RplMessage make_dio() const {
    RplMessage msg;
    msg.kind = RplMessageKind::kDio;
    msg.sender = state_.node;
    msg.rank = state_.rank;
    msg.version = state_.version;
    msg.prefix = state_.prefix;
    msg.dio_period = trickle_interval_ ? trickle_interval_ : kTrickleMin;
    return msg;
  }

  void reset_trickle() {
    cancel_timer(trickle_timer_);
    trickle_interval_ = kTrickleMin;
    trickle_timer_ = engine_.schedule_in(trickle_interval_, state_.node,
                                         [this] { trickle_tick(); });
  }

  void trickle_tick() {
    trickle_timer_.reset();
    if (!(is_root_ ? state_.prefix.has_value() : state_.joined())) return;
    trickle_interval_ = std::min<SimTime>(trickle_interval_ * 2, kTrickleMax);
    RplMessage dio = make_dio();
    dio.dio_period = trickle_interval_;
    radio_.broadcast_control(state_.node, dio);
    ++stats_.dio_sent;
    trickle_timer_ = engine_.schedule_in(trickle_interval_, state_.node,
                                         [this] { trickle_tick(); });
  }

  // --- DIS solicitation ---

  void send_dis() {
    RplMessage dis;
    dis.kind = RplMessageKind::kDis;
    dis.sender = state_.node;
    radio_.broadcast_control(state_.node, dis);
    ++stats_.dis_sent;
  }

  void dis_tick() {
    dis_timer_.reset();
    if (state_.joined()) return;  // timer stops; detach_self restarts it
    send_dis();
    dis_timer_ =
        engine_.schedule_in(kDisInterval, state_.node, [this] { dis_tick(); });
  }

  // --- parent hold ---

  void refresh_parent_hold() {
    cancel_timer(hold_timer_);
    if (!state_.preferred_parent) return;
    const auto it = candidates_.find(*state_.preferred_parent);
    const SimTime period =
        it != candidates_.end() ? it->second.period : kTrickleMin;
    hold_timer_ = engine_.schedule_in(parent_hold_duration(period),
                                      state_.node, [this] { hold_expired(); });
  }

  void hold_expired() {
    hold_timer_.reset();
    if (!state_.preferred_parent) return;
    on_parent_lost();
  }

  void send_dao() {
    if (!state_.preferred_parent) return;
    RplMessage dao;
    dao.kind = RplMessageKind::kDao;
    dao.sender = state_.node;
    dao.dao_origin = state_.node;
    radio_.send_control_unicast(state_.node, *state_.preferred_parent, dao);
    ++stats_.dao_sent;
  }

  void cancel_timer(std::optional<EventHandle>& handle) {
    if (handle) {
      engine_.cancel(*handle);
      handle.reset();
    }
  }

  Engine& engine_;
  RadioMedium& radio_;
  DodagRegistry& registry_;
  const bool is_root_;

  DodagState state_;
  std::map<NodeId, Candidate> candidates_;
  std::map<NodeId, NodeId> dao_table_;  // root only: origin -> first hop
  Stats stats_;
  bool version_migrated_ = false;

  SimTime trickle_interval_ = 0;
  std::optional<EventHandle> trickle_timer_;
  std::optional<EventHandle> hold_timer_;
  std::optional<EventHandle> dis_timer_;
};

inline void DodagRegistry::register_node(RplNode* node) {
  nodes_[node->id()] = node;
}

inline std::uint16_t DodagRegistry::live_rank(NodeId id) const {
  const RplNode* node = find(id);
  return node ? node->state().rank : kInfiniteRank;
}

inline void DodagRegistry::cascade_rank_update(NodeId node) {
  const std::uint16_t rank = live_rank(node);
  auto it = children_.find(node);
  if (it == children_.end()) return;
  const std::set<NodeId> snapshot = it->second;
  for (NodeId child_id : snapshot) {
    if (RplNode* child = find(child_id)) child->apply_parent_rank(rank);
  }
}

inline bool DodagRegistry::chain_passes_through(NodeId node,
                                                NodeId ancestor) const {
  NodeId cursor = node;
  for (std::size_t steps = 0; steps < nodes_.size(); ++steps) {
    if (cursor == ancestor) return true;
    const RplNode* cur = find(cursor);
    if (!cur || !cur->state().preferred_parent) return false;
    cursor = *cur->state().preferred_parent;
  }
  return true;  // walk failed to terminate, treat as unsafe
}

inline void DodagRegistry::detach_subtree(NodeId node) {
  auto it = children_.find(node);
  if (it != children_.end()) {
    const std::set<NodeId> snapshot = it->second;
    for (NodeId child_id : snapshot) detach_subtree(child_id);
  }
  if (RplNode* n = find(node)) n->detach_self();
}

inline std::size_t DodagRegistry::attached_count() const {
  std::size_t count = 0;
  for (const auto& [id, node] : nodes_) {
    if (node->state().joined()) ++count;
  }
  return count;
}

inline std::vector<std::string> DodagRegistry::validate() const {
  std::vector<std::string> violations;
  const std::size_t limit = nodes_.size();
  for (const auto& [id, node] : nodes_) {
    const DodagState& state = node->state();
    if (!state.joined()) continue;
    if (node->is_root()) {
      if (state.rank != kMinRank) {
        violations.push_back("root rank is not MIN_RANK");
      }
      continue;
    }
    if (!state.preferred_parent) {
      std::ostringstream os;
      os << "node " << id << " attached without a parent";
      violations.push_back(os.str());
      continue;
    }
    // Walk the chain to the root.
    NodeId cursor = id;
    std::uint16_t rank = state.rank;
    bool reached_root = false;
    bool broken = false;
    for (std::size_t steps = 0; steps <= limit && !broken; ++steps) {
      const RplNode* cur = find(cursor);
      if (!cur) break;
      if (cur->is_root()) {
        reached_root = true;
        break;
      }
      const auto parent = cur->state().preferred_parent;
      if (!parent) break;
      const std::uint16_t parent_rank = live_rank(*parent);
      if (parent_rank >= rank) {
        std::ostringstream os;
        os << "rank not strictly decreasing at node " << cursor << " ("
           << rank << " -> parent " << *parent << " rank " << parent_rank << ")";
        violations.push_back(os.str());
        broken = true;
        break;
      }
      if (cur->state().rank != parent_rank + kRankStep) {
        std::ostringstream os;
        os << "rank of node " << cursor << " is not parent rank + step";
        violations.push_back(os.str());
        broken = true;
        break;
      }
      cursor = *parent;
      rank = parent_rank;
    }
    if (!reached_root && !broken) {
      std::ostringstream os;
      os << "parent chain from node " << id << " does not reach the root";
      violations.push_back(os.str());
    }
  }
  return violations;
}

}  // namespace aqsim
