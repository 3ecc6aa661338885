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
#include <queue>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "aqsim/sim/rng.hpp"
#include "aqsim/sim/time.hpp"

namespace aqsim {

using EntityId = std::uint32_t;
using EventHandle = std::uint64_t;

/// Single-threaded discrete-event engine. Events fire in (fire_at, seq) order;
/// seq is the scheduling order, which makes simultaneous events dispatch FIFO
/// and the whole run deterministic for a fixed seed and scenario.
class Engine {
 public:
  using Action = std::function<void()>;

  struct TraceEntry {
    SimTime fire_at;
    std::uint64_t seq;
    EntityId target;

    bool operator==(const TraceEntry&) const = default;
  };

  explicit Engine(std::uint64_t seed) : rng_pool_(seed) {}

  SimTime now() const { return now_; }

  /// Enqueues an action. Throws if fire_at lies in the past.
  EventHandle schedule(SimTime fire_at, EntityId target, Action action) {
    if (fire_at < now_) {
      throw std::invalid_argument("schedule: fire_at is in the past");
    }
    const std::uint64_t seq = next_seq_++;
    queue_.push(Scheduled{fire_at, seq, target, std::move(action)});
    return seq;
  }

  EventHandle schedule_in(SimTime delay, EntityId target, Action action) {
    return schedule(now_ + delay, target, std::move(action));
  }

  /// Cancelled events are silently skipped at dispatch time.
  void cancel(EventHandle handle) { cancelled_.insert(handle); }

  /// Dispatches every pending event with fire_at <= end, then advances the
  /// clock to end. Returns the number of dispatched (non-cancelled) events.
  std::size_t run_until(SimTime end) {
    std::size_t dispatched = 0;
    while (!queue_.empty() && queue_.top().fire_at <= end) {
      Scheduled ev = queue_.top();
      queue_.pop();
      if (auto it = cancelled_.find(ev.seq); it != cancelled_.end()) {
        cancelled_.erase(it);
        continue;
      }
      now_ = ev.fire_at;
      if (trace_enabled_) trace_.push_back({ev.fire_at, ev.seq, ev.target});
      ev.action();
      ++dispatched;
      if (post_dispatch_hook_) post_dispatch_hook_();
    }
    now_ = end;
    return dispatched;
  }

  bool pending() const { return !queue_.empty(); }

  RngStream& rng(std::uint64_t key) { return rng_pool_.stream(key); }
  std::uint64_t master_seed() const { return rng_pool_.master_seed(); }

  void enable_trace(bool on) { trace_enabled_ = on; }
  const std::vector<TraceEntry>& trace() const { return trace_; }

  /// Invoked after every dispatched event; used by invariant validators.
  void set_post_dispatch_hook(std::function<void()> hook) {
    post_dispatch_hook_ = std::move(hook);
  }

 private:
  struct Scheduled {
    SimTime fire_at;
    std::uint64_t seq;
    EntityId target;
    Action action;
  };

  struct Later {
    bool operator()(const Scheduled& a, const Scheduled& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.seq > b.seq;
    }
  };

  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Scheduled, std::vector<Scheduled>, Later> queue_;
  std::unordered_set<std::uint64_t> cancelled_;
  RngPool rng_pool_;
  bool trace_enabled_ = false;
  std::vector<TraceEntry> trace_;
  std::function<void()> post_dispatch_hook_;
};

}  // namespace aqsim
