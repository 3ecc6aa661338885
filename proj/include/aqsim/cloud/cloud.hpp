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
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "aqsim/mote/adc.hpp"
#include "aqsim/mote/sample.hpp"
#include "aqsim/net/rpl_types.hpp"
#include "aqsim/sim/engine.hpp"

namespace aqsim {

/// Windows during which the ingest service refuses connections. Windows are
/// half-open [start, end), must be added in order, and may not overlap.
class OutageSchedule {
 public:
  void add_window(SimTime start, SimTime end) {
    if (end <= start) {
      throw std::invalid_argument("outage window must have start < end");
    }
    if (!windows_.empty() && start < windows_.back().second) {
      throw std::invalid_argument("outage windows must be sorted and disjoint");
    }
    windows_.emplace_back(start, end);
  }

  bool in_outage(SimTime t) const {
    for (const auto& [start, end] : windows_) {
      if (t < start) return false;
      if (t < end) return true;
    }
    return false;
  }

  const std::vector<std::pair<SimTime, SimTime>>& windows() const {
    return windows_;
  }

 private:
  std::vector<std::pair<SimTime, SimTime>> windows_;
};

/// One record as uploaded by the gateway: source identity, gateway receive
/// time, and the 20-byte wire image.
struct UploadRecord {
  NodeId mote_id = 0;
  SimTime receive_time_ms = 0;
  std::array<std::uint8_t, kSampleWireSize> wire{};
};

struct UploadBatch {
  std::vector<UploadRecord> records;
  std::uint32_t attempt = 0;
};

struct IngestResult {
  bool accepted = false;
  std::uint64_t fresh = 0;
  std::uint64_t suppressed = 0;
};

/// A stored row: raw counts plus the millivolt conversion applied exactly
/// once at ingest. event_time_ms is reconstructed from the mote's sampling
/// phase and the counter, since the wire format carries no timestamp.
struct IngestRecord {
  NodeId mote_id = 0;
  std::uint32_t counter = 0;
  SimTime receive_time_ms = 0;
  SimTime ingest_time_ms = 0;
  SimTime event_time_ms = 0;
  std::uint32_t raw[4] = {0, 0, 0, 0};  // no2_we, no2_ae, o3_we, o3_ae
  double mv[4] = {0.0, 0.0, 0.0, 0.0};
};

struct MoteCompleteness {
  std::uint64_t expected = 0;
  std::uint64_t received = 0;
  std::uint64_t suppressed = 0;
  std::vector<std::uint32_t> missing;
};

/// Mock ingest endpoint: deduplicates on (mote_id, counter), keeps the time
/// series in memory, and answers the verification queries the scenarios are
/// judged by. Refuses whole batches during outage windows.
class CloudService {
 public:
  struct Stats {
    std::uint64_t batches_accepted = 0;
    std::uint64_t batches_refused = 0;
    std::uint64_t records_stored = 0;
    std::uint64_t duplicates_suppressed = 0;
    std::uint64_t invalid_rejected = 0;
  };

  explicit CloudService(OutageSchedule outages = OutageSchedule(),
                        SimTime sample_period = 4000)
      : outages_(std::move(outages)), sample_period_(sample_period) {}

  /// First-sample time per mote, used to reconstruct event timestamps.
  void set_phase(NodeId mote, SimTime first_sample_at) {
    phases_[mote] = first_sample_at;
  }

  bool in_outage(SimTime now) const { return outages_.in_outage(now); }

  IngestResult ingest_batch(const UploadBatch& batch, SimTime now) {
    IngestResult result;
    if (outages_.in_outage(now)) {
      ++stats_.batches_refused;
      return result;  // connection refused, store untouched
    }
    for (const UploadRecord& upload : batch.records) {
      const SampleRecord sample = deserialize_sample(upload.wire);
      const Key key{upload.mote_id, sample.counter};
      if (store_.count(key)) {
        ++result.suppressed;
        ++stats_.duplicates_suppressed;
        ++suppressed_per_mote_[upload.mote_id];
        continue;
      }
      const std::uint32_t raw[4] = {sample.no2_we, sample.no2_ae, sample.o3_we,
                                    sample.o3_ae};
      if (std::max({raw[0], raw[1], raw[2], raw[3]}) >
          static_cast<std::uint32_t>(kAdcMaxCode)) {
        ++stats_.invalid_rejected;  // corrupted value that beat the checksum
        continue;
      }
      IngestRecord row;
      row.mote_id = upload.mote_id;
      row.counter = sample.counter;
      row.receive_time_ms = upload.receive_time_ms;
      row.ingest_time_ms = now;
      const auto phase = phases_.find(upload.mote_id);
      row.event_time_ms = (phase != phases_.end())
                              ? phase->second + SimTime{sample.counter} * sample_period_
                              : 0;
      for (int i = 0; i < 4; ++i) {
        row.raw[i] = raw[i];
        row.mv[i] = adc_convert(static_cast<int>(raw[i]));
      }
      store_.emplace(key, row);
      ++result.fresh;
      ++stats_.records_stored;
    }
    result.accepted = true;
    ++stats_.batches_accepted;
    return result;
  }

  /// Records for one mote with receive_time in [t0, t1), ordered by counter.
  std::vector<IngestRecord> query_series(NodeId mote, SimTime t0,
                                         SimTime t1) const {
    if (t0 > t1) throw std::invalid_argument("query_series: t0 > t1");
    std::vector<IngestRecord> out;
    for (auto it = store_.lower_bound(Key{mote, 0});
         it != store_.end() && it->first.first == mote; ++it) {
      if (it->second.receive_time_ms >= t0 && it->second.receive_time_ms < t1) {
        out.push_back(it->second);
      }
    }
    return out;
  }

  std::map<NodeId, MoteCompleteness> completeness_report(
      const std::map<NodeId, std::uint64_t>& expected) const {
    std::map<NodeId, MoteCompleteness> report;
    for (const auto& [mote, count] : expected) {
      MoteCompleteness entry;
      entry.expected = count;
      const auto sup = suppressed_per_mote_.find(mote);
      entry.suppressed = sup != suppressed_per_mote_.end() ? sup->second : 0;
      auto it = store_.lower_bound(Key{mote, 0});
      for (std::uint32_t c = 0; c < count; ++c) {
        while (it != store_.end() && it->first.first == mote &&
               it->first.second < c) {
          ++it;
        }
        if (it != store_.end() && it->first.first == mote &&
            it->first.second == c) {
          ++entry.received;
        } else {
          entry.missing.push_back(c);
        }
      }
      report[mote] = std::move(entry);
    }
    return report;
  }

  std::uint64_t stored_count() const { return store_.size(); }
  const Stats& stats() const { return stats_; }

  bool has_record(NodeId mote, std::uint32_t counter) const {
    return store_.count(Key{mote, counter}) != 0;
  }

  /// Full store as CSV, ordered by (mote_id, counter), with mV at fixed
  /// 9-digit precision so equal runs emit identical bytes.
  void export_csv(std::ostream& os) const {
    os << "mote_id,counter,receive_time_ms,no2_we_raw,no2_we_mv,no2_ae_raw,"
          "no2_ae_mv,o3_we_raw,o3_we_mv,o3_ae_raw,o3_ae_mv\n";
    char mv_text[40];
    for (const auto& [key, row] : store_) {
      os << row.mote_id << ',' << row.counter << ',' << row.receive_time_ms;
      for (int i = 0; i < 4; ++i) {
        std::snprintf(mv_text, sizeof mv_text, "%.9f", row.mv[i]);
        os << ',' << row.raw[i] << ',' << mv_text;
      }
      os << '\n';
    }
  }

 private:
  using Key = std::pair<NodeId, std::uint32_t>;

  OutageSchedule outages_;
  SimTime sample_period_;
  std::map<NodeId, SimTime> phases_;
  std::map<Key, IngestRecord> store_;
  std::map<NodeId, std::uint64_t> suppressed_per_mote_;
  Stats stats_;
};

/// Request/acknowledge channel between gateway and cloud with a fixed round
/// trip. The batch reaches the service after half the RTT; the verdict comes
/// back after the other half. One outstanding request at a time per caller
/// keeps the event order deterministic.
class CloudLink {
 public:
  using Completion = std::function<void(const IngestResult&)>;

  static constexpr SimTime kDefaultRttMs = 100;

  CloudLink(Engine& engine, CloudService& service, SimTime rtt = kDefaultRttMs)
      : engine_(engine), service_(service), rtt_(rtt) {}

  void submit(UploadBatch batch, Completion done) {
    const SimTime uplink = rtt_ / 2;
    engine_.schedule_in(
        uplink, kCloudEntity,
        [this, batch = std::move(batch), done = std::move(done)]() mutable {
          const IngestResult result = service_.ingest_batch(batch, engine_.now());
          engine_.schedule_in(rtt_ - rtt_ / 2, kCloudEntity,
                              [result, done = std::move(done)] { done(result); });
        });
  }

  SimTime rtt() const { return rtt_; }

 private:
  static constexpr EntityId kCloudEntity = 0xFFFF'0002;

  Engine& engine_;
  CloudService& service_;
  const SimTime rtt_;
};

}  // namespace aqsim
