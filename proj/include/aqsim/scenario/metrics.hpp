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
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "aqsim/net/radio.hpp"
#include "aqsim/net/rpl_types.hpp"
#include "aqsim/sim/time.hpp"

namespace aqsim {

struct MoteMetrics {
  std::uint64_t samples_generated = 0;
  std::uint64_t datagrams_submitted = 0;
  std::uint64_t no_route_drops = 0;
  std::uint64_t delivered_to_gateway = 0;
  std::uint64_t expected = 0;
  std::uint64_t received = 0;
  std::uint64_t missing = 0;
  std::uint64_t suppressed = 0;
  double completeness_pct = 0.0;
};

/// Everything a finished run reports: per-mote pipeline counts, radio and
/// routing outcomes, gateway buffering/journal/upload figures, and the cloud
/// store verdicts. Emitted as a flat key=value summary plus a per-mote CSV;
/// both are written in fixed order so identical runs emit identical bytes.
struct RunMetrics {
  std::uint64_t seed = 0;
  SimTime duration_ms = 0;
  SimTime horizon_ms = 0;
  std::uint64_t events_dispatched = 0;

  std::map<NodeId, MoteMetrics> motes;
  LinkStats radio_totals;

  std::optional<SimTime> root_init_ms;
  std::optional<SimTime> converged_ms;  // last node's first finite rank
  bool all_joined = false;
  std::uint64_t rpl_violations = 0;

  std::uint64_t br_forwarded = 0;
  std::uint64_t br_misroute_drops = 0;
  std::uint64_t br_overflow_drops = 0;

  std::uint64_t gw_valid_received = 0;
  std::uint64_t gw_malformed = 0;
  std::uint64_t gw_shed = 0;
  std::uint64_t buffer_peak = 0;
  std::uint64_t buffer_capacity = 0;
  std::uint64_t journal_entries = 0;
  std::uint64_t journal_acked = 0;
  std::uint64_t journal_unacked = 0;
  std::uint64_t journal_bytes = 0;
  std::uint64_t uploads_attempted = 0;
  std::uint64_t uploads_failed = 0;
  std::uint64_t probes_sent = 0;
  std::uint64_t replays_started = 0;
  std::uint64_t replay_records = 0;

  std::uint64_t cloud_stored = 0;
  std::uint64_t cloud_suppressed = 0;
  std::uint64_t cloud_batches_accepted = 0;
  std::uint64_t cloud_batches_refused = 0;

  double min_completeness_pct = 0.0;
};

namespace detail {
inline std::string fixed4(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  return buf;
}
}  // namespace detail

inline void write_summary(const RunMetrics& m, std::ostream& os) {
  const auto opt_ms = [](const std::optional<SimTime>& t) {
    return t ? std::to_string(*t) : std::string("-1");
  };
  os << "seed=" << m.seed << '\n';
  os << "duration_ms=" << m.duration_ms << '\n';
  os << "horizon_ms=" << m.horizon_ms << '\n';
  os << "events_dispatched=" << m.events_dispatched << '\n';
  os << "mote_count=" << m.motes.size() << '\n';
  os << "radio_frames_sent=" << m.radio_totals.frames_sent << '\n';
  os << "radio_frames_delivered=" << m.radio_totals.frames_delivered << '\n';
  os << "radio_frames_dropped=" << m.radio_totals.frames_dropped << '\n';
  os << "radio_attempts=" << m.radio_totals.attempts << '\n';
  os << "radio_attempt_losses=" << m.radio_totals.attempt_losses << '\n';
  os << "rpl_root_init_ms=" << opt_ms(m.root_init_ms) << '\n';
  os << "rpl_converged_ms=" << opt_ms(m.converged_ms) << '\n';
  os << "rpl_all_joined=" << (m.all_joined ? 1 : 0) << '\n';
  os << "rpl_violations=" << m.rpl_violations << '\n';
  os << "br_forwarded=" << m.br_forwarded << '\n';
  os << "br_misroute_drops=" << m.br_misroute_drops << '\n';
  os << "br_overflow_drops=" << m.br_overflow_drops << '\n';
  os << "gw_valid_received=" << m.gw_valid_received << '\n';
  os << "gw_malformed=" << m.gw_malformed << '\n';
  os << "gw_shed=" << m.gw_shed << '\n';
  os << "buffer_peak=" << m.buffer_peak << '\n';
  os << "buffer_capacity=" << m.buffer_capacity << '\n';
  os << "journal_entries=" << m.journal_entries << '\n';
  os << "journal_acked=" << m.journal_acked << '\n';
  os << "journal_unacked=" << m.journal_unacked << '\n';
  os << "journal_bytes=" << m.journal_bytes << '\n';
  os << "uploads_attempted=" << m.uploads_attempted << '\n';
  os << "uploads_failed=" << m.uploads_failed << '\n';
  os << "probes_sent=" << m.probes_sent << '\n';
  os << "replays_started=" << m.replays_started << '\n';
  os << "replay_records=" << m.replay_records << '\n';
  os << "cloud_stored=" << m.cloud_stored << '\n';
  os << "cloud_suppressed=" << m.cloud_suppressed << '\n';
  os << "cloud_batches_accepted=" << m.cloud_batches_accepted << '\n';
  os << "cloud_batches_refused=" << m.cloud_batches_refused << '\n';
  os << "completeness_min_pct=" << detail::fixed4(m.min_completeness_pct)
     << '\n';
}

inline void write_mote_csv(const RunMetrics& m, std::ostream& os) {
  os << "mote_id,samples_generated,datagrams_submitted,no_route_drops,"
        "delivered_to_gateway,expected,received,missing,suppressed,"
        "completeness_pct\n";
  for (const auto& [id, mote] : m.motes) {
    os << id << ',' << mote.samples_generated << ','
       << mote.datagrams_submitted << ',' << mote.no_route_drops << ','
       << mote.delivered_to_gateway << ',' << mote.expected << ','
       << mote.received << ',' << mote.missing << ',' << mote.suppressed << ','
       << detail::fixed4(mote.completeness_pct) << '\n';
  }
}

}  // namespace aqsim
