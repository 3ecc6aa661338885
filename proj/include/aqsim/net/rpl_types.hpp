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

#include "aqsim/sim/time.hpp"

namespace aqsim {

using NodeId = std::uint16_t;

// Hop-count objective: the root sits at MIN_RANK and every hop adds RANK_STEP.
inline constexpr std::uint16_t kMinRank = 256;
inline constexpr std::uint16_t kRankStep = 256;
inline constexpr std::uint16_t kInfiniteRank = 0xFFFF;

enum class RplMessageKind : std::uint8_t { kDio, kDis, kDao };

/// Control-plane message. Carried as a structured event over the lossy link
/// model; only application payloads are bit-exact on this simulator's wire.
struct RplMessage {
  RplMessageKind kind = RplMessageKind::kDio;
  NodeId sender = 0;
  std::uint16_t rank = kInfiniteRank;
  std::uint32_t version = 0;
  std::optional<std::uint64_t> prefix;
  // Sender's current DIO interval; receivers scale parent hold timers from it.
  SimTime dio_period = 0;
  // DAO only: the node whose upward reachability is being advertised.
  NodeId dao_origin = 0;
};

struct DodagState {
  NodeId node = 0;
  std::uint16_t rank = kInfiniteRank;
  std::optional<NodeId> preferred_parent;
  std::uint32_t version = 0;
  std::optional<std::uint64_t> prefix;

  bool joined() const { return rank != kInfiniteRank; }
};

}  // namespace aqsim
