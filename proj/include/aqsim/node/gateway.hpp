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
#include <deque>
#include <filesystem>
#include <fstream>
#include <optional>
#include <utility>
#include <vector>

#include "aqsim/cloud/cloud.hpp"
#include "aqsim/net/datagram.hpp"
#include "aqsim/node/journal.hpp"
#include "aqsim/serial/framing.hpp"
#include "aqsim/serial/serial_line.hpp"
#include "aqsim/serial/slip.hpp"
#include "aqsim/sim/engine.hpp"

namespace aqsim {

constexpr std::uint64_t kDefaultPrefix = 0xAAAA'0000'0000'0000ull;

/// Records of 24 hours at one sample per 4 s: the per-mote buffer sizing
/// constant (24 x 3600 x 0.25).
constexpr std::uint64_t kRecordsPerMotePerDay = 21600;

/// Bounded FIFO between the serial producer and the cloud consumer. Why a
/// plain deque with a capacity check is enough: the simulator interleaves
/// producer and consumer as events on one thread, so every operation is
/// trivially linearizable; the capacity check is the contract that matters.
class GatewayBuffer {
 public:
  struct Item {
    NodeId mote_id = 0;
    SimTime receive_time_ms = 0;
    std::array<std::uint8_t, kSampleWireSize> wire{};
    std::uint64_t journal_offset = 0;
  };

  explicit GatewayBuffer(std::size_t capacity) : capacity_(capacity) {}

  bool push(Item item) {
    if (items_.size() >= capacity_) return false;
    items_.push_back(std::move(item));
    if (items_.size() > peak_) peak_ = items_.size();
    return true;
  }

  std::optional<Item> pop() {
    if (items_.empty()) return std::nullopt;
    Item item = std::move(items_.front());
    items_.pop_front();
    return item;
  }

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::size_t peak_depth() const { return peak_; }
  bool empty() const { return items_.empty(); }

 private:
  std::deque<Item> items_;
  std::size_t capacity_;
  std::size_t peak_ = 0;
};

/// The upload host: producer side decodes SLIP frames from the serial line,
/// journals every valid record before buffering it, and logs a receipt line;
/// consumer side drains the buffer in batches over the cloud link.
///
/// The consumer treats the cloud link as down until proven up: it sends
/// empty probe batches under exponential backoff and only starts popping the
/// buffer once a probe (or upload) succeeds. A failed upload flips the
/// belief back to down; its records stay unacked in the journal and return
/// via replay. On every down-to-up transition all unacked journal entries
/// are re-sent in journal order before new buffer drains; the cloud
/// suppresses whatever that duplicates.
class Gateway {
 public:
  struct Config {
    std::uint64_t prefix = kDefaultPrefix;
    std::size_t batch_size = 100;
    std::size_t buffer_capacity = kRecordsPerMotePerDay;
    SimTime backoff_min = 1 * kSecond;
    SimTime backoff_max = 60 * kSecond;
    SimTime prefix_reannounce = 60 * kSecond;
  };

  struct Stats {
    std::uint64_t valid_received = 0;
    std::uint64_t malformed_records = 0;
    std::uint64_t other_port_ignored = 0;
    std::uint64_t undecodable_datagrams = 0;
    std::uint64_t shed = 0;
    std::uint64_t prefix_pushes = 0;
    std::uint64_t probes_sent = 0;
    std::uint64_t probes_failed = 0;
    std::uint64_t uploads_attempted = 0;
    std::uint64_t uploads_failed = 0;
    std::uint64_t upload_records_sent = 0;
    std::uint64_t acked_records = 0;
    std::uint64_t duplicates_reported = 0;
    std::uint64_t replays_started = 0;
    std::uint64_t replay_records = 0;
    std::uint64_t link_up_transitions = 0;
    std::uint64_t link_down_transitions = 0;
  };

  Gateway(Engine& engine, SerialLine& line, SerialSide side, CloudLink& cloud,
          Journal& journal, const std::filesystem::path& out_dir, Config config)
      : engine_(engine),
        line_(line),
        side_(side),
        cloud_(cloud),
        journal_(journal),
        buffer_(config.buffer_capacity),
        config_(config),
        backoff_(config.backoff_min) {
    std::filesystem::create_directories(out_dir);
    receipts_.open(out_dir / "receipts.log", std::ios::app);
    if (!receipts_) {
      throw std::runtime_error("gateway: cannot open receipt log");
    }
    line_.set_sink(side_, [this](std::vector<std::uint8_t>&& bytes) {
      on_serial_bytes(bytes);
    });
  }

  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  /// Boot sequence: announce the prefix (and keep re-announcing it, which is
  /// idempotent at the border router), then start probing the cloud.
  void boot() {
    push_prefix();
    engine_.schedule_in(0, kGatewayEntity, [this] { probe(); });
  }

  void push_prefix() {
    ++stats_.prefix_pushes;
    line_.send(side_, slip_encode(build_prefix_message(config_.prefix)));
    engine_.schedule_in(config_.prefix_reannounce, kGatewayEntity,
                        [this] { push_prefix(); });
  }

  const Stats& stats() const { return stats_; }
  const GatewayBuffer& buffer() const { return buffer_; }
  const Journal& journal() const { return journal_; }
  bool link_believed_up() const { return link_up_; }
  std::uint64_t serial_malformed_frames() const {
    return decoder_.malformed_count();
  }
  std::uint64_t outstanding_upload_records() const {
    return busy_ ? in_flight_offsets_.size() : 0;
  }

  void flush_logs() { receipts_.flush(); }

 private:
  static constexpr EntityId kGatewayEntity = 0xFFFF'0003;

  void on_serial_bytes(const std::vector<std::uint8_t>& bytes) {
    for (const auto& payload : decoder_.feed(bytes)) {
      const auto msg = parse_serial_message(payload);
      if (!msg) {
        ++stats_.undecodable_datagrams;
        continue;
      }
      if (msg->type != kSerialTypeData) continue;  // own prefix echo etc.
      const auto datagram = decode_datagram(msg->body);
      if (!datagram) {
        ++stats_.undecodable_datagrams;
        continue;
      }
      if (datagram->dst_port != kIngestPort) {
        ++stats_.other_port_ignored;
        continue;
      }
      if (datagram->payload.size() != kSampleWireSize) {
        ++stats_.malformed_records;
        continue;
      }
      produce(datagram->src, datagram->payload);
    }
  }

  /// Durability-first producer: journal append, receipt line, then buffer.
  void produce(NodeId mote_id, const std::vector<std::uint8_t>& payload) {
    const SimTime now = engine_.now();
    GatewayBuffer::Item item;
    item.mote_id = mote_id;
    item.receive_time_ms = now;
    std::copy(payload.begin(), payload.end(), item.wire.begin());
    item.journal_offset = journal_.append(mote_id, now, item.wire);
    ++stats_.valid_received;

    const SampleRecord record = deserialize_sample(item.wire);
    receipts_ << "t=" << now << " mote=" << mote_id
              << " counter=" << record.counter << " no2_we=" << record.no2_we
              << " no2_ae=" << record.no2_ae << " o3_we=" << record.o3_we
              << " o3_ae=" << record.o3_ae << "\n";

    if (!buffer_.push(std::move(item))) {
      ++stats_.shed;  // journal-and-shed: still recoverable from disk
    }
    engine_.schedule_in(0, kGatewayEntity, [this] { pump(); });
  }

  /// Empty-batch liveness check, the only traffic while the link is believed
  /// down. Backoff doubles per failure up to the cap.
  void probe() {
    if (busy_ || link_up_) return;
    busy_ = true;
    ++stats_.probes_sent;
    cloud_.submit(UploadBatch{}, [this](const IngestResult& result) {
      busy_ = false;
      if (result.accepted) {
        on_link_up();
      } else {
        ++stats_.probes_failed;
        engine_.schedule_in(backoff_, kGatewayEntity, [this] { probe(); });
        backoff_ = std::min(backoff_ * 2, config_.backoff_max);
      }
    });
  }

  void on_link_up() {
    link_up_ = true;
    ++stats_.link_up_transitions;
    backoff_ = config_.backoff_min;
    replay_queue_.clear();
    for (std::uint64_t offset : journal_.unacked_offsets()) {
      replay_queue_.push_back(offset);
    }
    if (!replay_queue_.empty()) {
      ++stats_.replays_started;
    }
    pump();
  }

  void on_link_down() {
    link_up_ = false;
    ++stats_.link_down_transitions;
    replay_queue_.clear();
    backoff_ = config_.backoff_min;
    engine_.schedule_in(backoff_, kGatewayEntity, [this] { probe(); });
  }

  /// Consumer: replay queue first, then buffer, one batch outstanding.
  void pump() {
    if (busy_ || !link_up_) return;
    UploadBatch batch;
    in_flight_offsets_.clear();
    while (!replay_queue_.empty() &&
           batch.records.size() < config_.batch_size) {
      const std::uint64_t offset = replay_queue_.front();
      replay_queue_.pop_front();
      const Journal::Entry& entry = journal_.at_offset(offset);
      if (entry.acked) continue;  // acked since the snapshot was taken
      batch.records.push_back(
          UploadRecord{entry.mote_id, entry.receive_time_ms, entry.wire});
      in_flight_offsets_.push_back(offset);
      ++stats_.replay_records;
    }
    while (batch.records.size() < config_.batch_size) {
      auto item = buffer_.pop();
      if (!item) break;
      batch.records.push_back(
          UploadRecord{item->mote_id, item->receive_time_ms, item->wire});
      in_flight_offsets_.push_back(item->journal_offset);
    }
    if (batch.records.empty()) return;

    busy_ = true;
    ++stats_.uploads_attempted;
    stats_.upload_records_sent += batch.records.size();
    cloud_.submit(std::move(batch), [this](const IngestResult& result) {
      busy_ = false;
      if (result.accepted) {
        for (std::uint64_t offset : in_flight_offsets_) {
          journal_.mark_acked(offset);
        }
        stats_.acked_records += in_flight_offsets_.size();
        stats_.duplicates_reported += result.suppressed;
        in_flight_offsets_.clear();
        pump();
      } else {
        ++stats_.uploads_failed;
        // The batch stays unacked in the journal and returns via replay.
        in_flight_offsets_.clear();
        on_link_down();
      }
    });
  }

  Engine& engine_;
  SerialLine& line_;
  const SerialSide side_;
  CloudLink& cloud_;
  Journal& journal_;
  GatewayBuffer buffer_;
  const Config config_;

  SlipDecoder decoder_;
  std::ofstream receipts_;
  bool link_up_ = false;
  bool busy_ = false;
  SimTime backoff_;
  std::deque<std::uint64_t> replay_queue_;
  std::vector<std::uint64_t> in_flight_offsets_;
  Stats stats_;
};

}  // namespace aqsim
