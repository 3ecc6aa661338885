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
#include <optional>
#include <vector>

#include "aqsim/mote/adc.hpp"
#include "aqsim/mote/process.hpp"
#include "aqsim/mote/sample.hpp"
#include "aqsim/mote/signal_model.hpp"
#include "aqsim/net/rpl_types.hpp"
#include "aqsim/sim/engine.hpp"

namespace aqsim {

constexpr SimTime kDefaultSamplePeriodMs = 4000;  // 0.25 samples per second

/// One sensor node's application side: a periodic ADC process reads the four
/// mapped electrode channels, quantizes them, stamps the sampling counter,
/// and posts the record to a UDP server process that hands it to the network
/// stack. The first sample fires one period after start plus a sub-second
/// jitter drawn from the mote's own stream, so co-located motes do not
/// sample in lockstep.
class Mote {
 public:
  struct Stats {
    std::uint64_t samples_taken = 0;
    std::uint64_t datagrams_submitted = 0;
    std::uint64_t no_route_drops = 0;
    std::uint64_t counter_wraps = 0;
    std::vector<SimTime> sample_times;
  };

  /// Hands a finished record to the network layer. Returns false when the
  /// node has no upward route, in which case the mote counts the drop.
  using SendHook = std::function<bool(const SampleRecord&)>;

  Mote(Engine& engine, NodeId id, GasSignalModel model = GasSignalModel(),
       SensorChannelMap channels = SensorChannelMap(),
       SimTime period = kDefaultSamplePeriodMs)
      : engine_(engine),
        id_(id),
        model_(std::move(model)),
        channels_(channels),
        period_(period) {
    if (!channels_.valid()) {
      throw std::invalid_argument("sensor channel map is not valid");
    }
    scheduler_.register_process("adc", [this](const MoteEvent&) { read_adc(); });
    scheduler_.register_process("udp-server", [this](const MoteEvent& ev) {
      submit(ev.record);
    });
  }

  Mote(const Mote&) = delete;
  Mote& operator=(const Mote&) = delete;

  void set_send_hook(SendHook hook) { send_ = std::move(hook); }

  /// Begins sampling. With a budget, the mote stops after exactly that many
  /// samples; without one it runs for as long as the engine does.
  void start(std::optional<std::uint64_t> sample_budget = std::nullopt) {
    budget_ = sample_budget;
    const SimTime jitter = rng().uniform_below(kSecond);
    first_sample_at_ = engine_.now() + period_ + jitter;
    engine_.schedule(first_sample_at_, id_, [this] { sample_tick(); });
  }

  NodeId id() const { return id_; }
  SimTime period() const { return period_; }
  SimTime first_sample_at() const { return first_sample_at_; }
  std::uint32_t next_counter() const { return counter_; }
  const Stats& stats() const { return stats_; }

 private:
  struct MoteEvent {
    SampleRecord record;
  };

  RngStream& rng() {
    return engine_.rng(stream_key(StreamDomain::kNode, id_, 0));
  }

  void sample_tick() {
    if (budget_ && stats_.samples_taken >= *budget_) return;
    scheduler_.post("adc", MoteEvent{});
    if (!budget_ || stats_.samples_taken < *budget_) {
      engine_.schedule_in(period_, id_, [this] { sample_tick(); });
    }
  }

  void read_adc() {
    const SimTime now = engine_.now();
    SampleRecord record;
    record.counter = counter_++;
    if (counter_ == 0) ++stats_.counter_wraps;
    record.no2_we = read_channel(channels_.no2_we, now);
    record.no2_ae = read_channel(channels_.no2_ae, now);
    record.o3_we = read_channel(channels_.o3_we, now);
    record.o3_ae = read_channel(channels_.o3_ae, now);
    ++stats_.samples_taken;
    stats_.sample_times.push_back(now);
    scheduler_.post("udp-server", MoteEvent{record});
  }

  std::uint32_t read_channel(int channel, SimTime now) {
    return static_cast<std::uint32_t>(
        adc_quantize(model_.sample(channel, now, rng())));
  }

  void submit(const SampleRecord& record) {
    if (send_ && send_(record)) {
      ++stats_.datagrams_submitted;
    } else {
      ++stats_.no_route_drops;
    }
  }

  Engine& engine_;
  const NodeId id_;
  GasSignalModel model_;
  SensorChannelMap channels_;
  const SimTime period_;
  ProcessScheduler<MoteEvent> scheduler_;
  SendHook send_;
  std::optional<std::uint64_t> budget_;
  SimTime first_sample_at_ = 0;
  std::uint32_t counter_ = 0;
  Stats stats_;
};

}  // namespace aqsim
