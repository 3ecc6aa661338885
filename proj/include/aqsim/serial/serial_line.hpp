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
#include <functional>
#include <utility>
#include <vector>

#include "aqsim/sim/engine.hpp"

namespace aqsim {

enum class SerialSide : int { kA = 0, kB = 1 };

/// Full-duplex serial link between two endpoints. Frames are serialized one
/// per millisecond per direction (byte clocking folded into that constant),
/// delivered in order, with at most `capacity` frames in flight before the
/// sender sees backpressure. An optional per-byte error probability flips
/// bytes in transit, which downstream SLIP decoding surfaces as malformed
/// frames.
class SerialLine {
 public:
  struct Stats {
    std::uint64_t frames_sent = 0;
    std::uint64_t frames_delivered = 0;
    std::uint64_t frames_rejected = 0;
    std::uint64_t bytes_corrupted = 0;
  };

  using Sink = std::function<void(std::vector<std::uint8_t>&&)>;

  static constexpr SimTime kDefaultFrameLatency = 1;  // ms per frame
  static constexpr std::size_t kDefaultCapacity = 64;
  static constexpr EntityId kSerialEntity = 0xFFFF'0001;

  explicit SerialLine(Engine& engine,
                      SimTime frame_latency = kDefaultFrameLatency,
                      std::size_t capacity = kDefaultCapacity)
      : engine_(engine), frame_latency_(frame_latency), capacity_(capacity) {}

  SerialLine(const SerialLine&) = delete;
  SerialLine& operator=(const SerialLine&) = delete;

  void set_byte_error_prob(double p) { byte_error_prob_ = p; }

  /// Registers the receiver for frames arriving at `side`.
  void set_sink(SerialSide side, Sink sink) {
    sinks_[index(side)] = std::move(sink);
  }

  std::size_t queue_depth(SerialSide from) const {
    return in_flight_[index(from)];
  }

  const Stats& stats(SerialSide from) const { return stats_[index(from)]; }

  /// Queues one encoded frame from `from` toward the opposite side. Returns
  /// false when the direction's queue is full; the frame is then rejected
  /// and the caller decides what to shed.
  bool send(SerialSide from, std::vector<std::uint8_t> bytes) {
    const int dir = index(from);
    if (in_flight_[dir] >= capacity_) {
      ++stats_[dir].frames_rejected;
      return false;
    }
    ++stats_[dir].frames_sent;
    if (byte_error_prob_ > 0.0) corrupt(dir, bytes);
    const SimTime start = std::max(engine_.now(), busy_until_[dir]);
    const SimTime deliver_at = start + frame_latency_;
    busy_until_[dir] = deliver_at;
    ++in_flight_[dir];
    engine_.schedule(deliver_at, kSerialEntity,
                     [this, dir, bytes = std::move(bytes)]() mutable {
                       --in_flight_[dir];
                       ++stats_[dir].frames_delivered;
                       Sink& sink = sinks_[1 - dir];
                       if (sink) sink(std::move(bytes));
                     });
    return true;
  }

 private:
  static int index(SerialSide side) { return static_cast<int>(side); }

  void corrupt(int dir, std::vector<std::uint8_t>& bytes) {
    RngStream& rng =
        engine_.rng(stream_key(StreamDomain::kSerial, dir, 0));
    for (auto& b : bytes) {
      if (rng.bernoulli(byte_error_prob_)) {
        b ^= static_cast<std::uint8_t>(1 + rng.uniform_below(255));
        ++stats_[dir].bytes_corrupted;
      }
    }
  }

  Engine& engine_;
  const SimTime frame_latency_;
  const std::size_t capacity_;
  double byte_error_prob_ = 0.0;
  std::array<Sink, 2> sinks_{};
  std::array<SimTime, 2> busy_until_{0, 0};
  std::array<std::size_t, 2> in_flight_{0, 0};
  std::array<Stats, 2> stats_{};
};

}  // namespace aqsim
