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

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "aqsim/cloud/cloud.hpp"
#include "aqsim/mote/mote.hpp"
#include "aqsim/net/radio.hpp"
#include "aqsim/net/rpl.hpp"
#include "aqsim/net/stack.hpp"
#include "aqsim/node/border_router.hpp"
#include "aqsim/node/gateway.hpp"
#include "aqsim/node/journal.hpp"
#include "aqsim/scenario/config.hpp"
#include "aqsim/scenario/metrics.hpp"
#include "aqsim/serial/serial_line.hpp"
#include "aqsim/sim/engine.hpp"

namespace aqsim {

struct RunResult {
  RunMetrics metrics;
  std::vector<std::string> violation_samples;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

/// Owns and wires every component of one scenario: radio mesh with RPL and
/// per-node stacks, the border router and serial line, the gateway with its
/// journal, and the cloud service. Construction prepares a fresh artifact
/// directory; start() boots the pieces; then run_all() drives the engine to
/// the horizon and collect() verifies and reports.
class World {
 public:
  static constexpr std::size_t kMaxViolationSamples = 20;

  World(ScenarioConfig config, const std::filesystem::path& out_dir)
      : config_(std::move(config)),
        out_dir_(prepare_out_dir(out_dir)),
        engine_(config_.seed),
        radio_(engine_),
        serial_(engine_),
        cloud_(make_outages(config_), config_.period_ms),
        cloud_link_(engine_, cloud_),
        journal_(out_dir_) {
    serial_.set_byte_error_prob(config_.serial_error);

    for (const NodeSpec& spec : config_.nodes) {
      rpl_[spec.id] = std::make_unique<RplNode>(engine_, radio_, registry_,
                                                spec.id, spec.is_border);
      stacks_[spec.id] = std::make_unique<NodeStack>(engine_, radio_,
                                                     *rpl_[spec.id]);
    }
    for (const LinkSpec& link : config_.materialize_links()) {
      radio_.add_link(link.a, link.b, LinkModel{link.loss});
    }

    const NodeId border = config_.border_id();
    border_ = std::make_unique<BorderRouter>(*stacks_[border], *rpl_[border],
                                             serial_, SerialSide::kA);

    Gateway::Config gw;
    gw.batch_size = config_.batch_size;
    gw.buffer_capacity = config_.buffer_capacity.value_or(
        config_.mote_ids().size() * kRecordsPerMotePerDay);
    gateway_ = std::make_unique<Gateway>(engine_, serial_, SerialSide::kB,
                                         cloud_link_, journal_, out_dir_, gw);

    for (NodeId id : config_.mote_ids()) {
      auto mote = std::make_unique<Mote>(engine_, id, GasSignalModel(),
                                         SensorChannelMap(), config_.period_ms);
      mote->set_send_hook([stack = stacks_[id].get(), id](
                              const SampleRecord& record) {
        Datagram datagram;
        datagram.src = id;
        datagram.dst = kGatewaySuffix;
        datagram.src_port = kIngestPort;
        datagram.dst_port = kIngestPort;
        const auto wire = serialize_sample(record);
        datagram.payload.assign(wire.begin(), wire.end());
        return stack->send_datagram(datagram);
      });
      motes_[id] = std::move(mote);
    }
  }

  World(const World&) = delete;
  World& operator=(const World&) = delete;

  /// Boots routing, sampling, and the gateway; installs the step-level
  /// routing validator. Deterministic: everything iterates in id order.
  void start() {
    engine_.set_post_dispatch_hook([this] {
      if (!registry_.consume_dirty()) return;
      const auto violations = registry_.validate();
      for (const auto& v : violations) {
        ++violation_count_;
        if (violation_samples_.size() < kMaxViolationSamples) {
          violation_samples_.push_back("t=" + std::to_string(engine_.now()) +
                                       ": " + v);
        }
      }
    });

    for (auto& [id, node] : rpl_) {
      node->boot();
    }
    const std::uint64_t budget = config_.samples_per_mote();
    for (auto& [id, mote] : motes_) {
      mote->start(budget);
      cloud_.set_phase(id, mote->first_sample_at());
    }
    engine_.schedule(config_.gateway_boot_ms, 0xFFFF'0004,
                     [this] { gateway_->boot(); });
  }

  std::size_t run_all() {
    events_ = engine_.run_until(config_.horizon_ms());
    return events_;
  }

  RunResult collect() {
    gateway_->flush_logs();
    RunResult result;
    RunMetrics& m = result.metrics;

    m.seed = config_.seed;
    m.duration_ms = config_.duration_ms;
    m.horizon_ms = config_.horizon_ms();
    m.events_dispatched = events_;
    m.radio_totals = radio_.totals();
    m.root_init_ms = registry_.root_init_time();
    m.rpl_violations = violation_count_;

    std::map<NodeId, std::uint64_t> journal_per_mote;
    for (const Journal::Entry& entry : journal_.entries()) {
      ++journal_per_mote[entry.mote_id];
    }

    std::map<NodeId, std::uint64_t> expected;
    const std::uint64_t budget = config_.samples_per_mote();
    for (const auto& [id, mote] : motes_) {
      expected[id] = budget;
    }
    const auto report = cloud_.completeness_report(expected);

    m.all_joined = registry_.attached_count() == rpl_.size();
    const auto& first_times = registry_.first_finite_times();
    if (first_times.size() == rpl_.size()) {
      SimTime last = 0;
      for (const auto& [id, t] : first_times) last = std::max(last, t);
      m.converged_ms = last;
    }

    double min_pct = motes_.empty() ? 0.0 : 100.0;
    for (const auto& [id, mote] : motes_) {
      MoteMetrics mm;
      const auto& stats = mote->stats();
      mm.samples_generated = stats.samples_taken;
      mm.datagrams_submitted = stats.datagrams_submitted;
      mm.no_route_drops = stats.no_route_drops;
      mm.delivered_to_gateway =
          journal_per_mote.count(id) ? journal_per_mote[id] : 0;
      mm.expected = expected[id];
      const auto it = report.find(id);
      if (it != report.end()) {
        mm.received = it->second.received;
        mm.missing = it->second.missing.size();
        mm.suppressed = it->second.suppressed;
      }
      mm.completeness_pct =
          mm.expected == 0 ? 100.0 : 100.0 * mm.received / mm.expected;
      min_pct = std::min(min_pct, mm.completeness_pct);
      m.motes[id] = mm;

      if (mm.samples_generated !=
          mm.datagrams_submitted + mm.no_route_drops) {
        result.failures.push_back("mote " + std::to_string(id) +
                                  ": sample conservation broken");
      }
    }
    m.min_completeness_pct = min_pct;

    const auto& br = border_->stats();
    m.br_forwarded = br.forwarded;
    m.br_misroute_drops = br.misroute_drops;
    m.br_overflow_drops = br.overflow_drops;

    const auto& gw = gateway_->stats();
    m.gw_valid_received = gw.valid_received;
    m.gw_malformed = gw.malformed_records;
    m.gw_shed = gw.shed;
    m.buffer_peak = gateway_->buffer().peak_depth();
    m.buffer_capacity = gateway_->buffer().capacity();
    m.journal_entries = journal_.entry_count();
    m.journal_acked = journal_.acked_count();
    m.journal_unacked = journal_.unacked_count();
    m.journal_bytes = journal_.size_bytes();
    m.uploads_attempted = gw.uploads_attempted;
    m.uploads_failed = gw.uploads_failed;
    m.probes_sent = gw.probes_sent;
    m.replays_started = gw.replays_started;
    m.replay_records = gw.replay_records;

    const auto& cloud = cloud_.stats();
    m.cloud_stored = cloud.records_stored;
    m.cloud_suppressed = cloud.duplicates_suppressed;
    m.cloud_batches_accepted = cloud.batches_accepted;
    m.cloud_batches_refused = cloud.batches_refused;

    result.violation_samples = violation_samples_;
    if (violation_count_ > 0) {
      result.failures.push_back("routing invariants violated " +
                                std::to_string(violation_count_) + " times");
    }
    if (m.journal_entries != m.gw_valid_received) {
      result.failures.push_back("journal entries do not match valid receipts");
    }
    if (m.journal_acked + m.journal_unacked != m.journal_entries) {
      result.failures.push_back("journal ack bookkeeping inconsistent");
    }
    if (m.buffer_peak > m.buffer_capacity) {
      result.failures.push_back("buffer exceeded its capacity");
    }
    const auto& root_stack = stacks_.at(config_.border_id())->stats();
    if (root_stack.datagrams_delivered !=
        m.br_forwarded + m.br_misroute_drops + m.br_overflow_drops) {
      result.failures.push_back("border router conservation broken");
    }
    if (config_.expect_completeness &&
        min_pct < *config_.expect_completeness) {
      result.failures.push_back(
          "completeness " + detail::fixed4(min_pct) + "% below expected " +
          detail::fixed4(*config_.expect_completeness) + "%");
    }

    write_artifacts(m);
    return result;
  }

  // Component access for focused tests.
  Engine& engine() { return engine_; }
  RadioMedium& radio() { return radio_; }
  DodagRegistry& registry() { return registry_; }
  Gateway& gateway() { return *gateway_; }
  BorderRouter& border() { return *border_; }
  CloudService& cloud() { return cloud_; }
  Journal& journal() { return journal_; }
  Mote& mote(NodeId id) { return *motes_.at(id); }
  RplNode& rpl(NodeId id) { return *rpl_.at(id); }
  NodeStack& stack(NodeId id) { return *stacks_.at(id); }
  const ScenarioConfig& config() const { return config_; }
  const std::filesystem::path& out_dir() const { return out_dir_; }

 private:
  static std::filesystem::path prepare_out_dir(
      const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const char* name : {"journal.bin", "journal.ack", "receipts.log",
                             "series.csv", "metrics.txt", "metrics.csv"}) {
      std::filesystem::remove(dir / name);
    }
    return dir;
  }

  static OutageSchedule make_outages(const ScenarioConfig& config) {
    OutageSchedule schedule;
    for (const auto& [start, end] : config.outages) {
      schedule.add_window(start, end);
    }
    return schedule;
  }

  void write_artifacts(const RunMetrics& m) const {
    std::ofstream summary(out_dir_ / "metrics.txt", std::ios::trunc);
    write_summary(m, summary);
    std::ofstream mote_csv(out_dir_ / "metrics.csv", std::ios::trunc);
    write_mote_csv(m, mote_csv);
    std::ofstream series(out_dir_ / "series.csv", std::ios::trunc);
    cloud_.export_csv(series);
  }

  ScenarioConfig config_;
  std::filesystem::path out_dir_;
  Engine engine_;
  RadioMedium radio_;
  DodagRegistry registry_;
  SerialLine serial_;
  CloudService cloud_;
  CloudLink cloud_link_;
  Journal journal_;
  std::map<NodeId, std::unique_ptr<RplNode>> rpl_;
  std::map<NodeId, std::unique_ptr<NodeStack>> stacks_;
  std::map<NodeId, std::unique_ptr<Mote>> motes_;
  std::unique_ptr<BorderRouter> border_;
  std::unique_ptr<Gateway> gateway_;
  std::vector<std::string> violation_samples_;
  std::uint64_t violation_count_ = 0;
  std::size_t events_ = 0;
};

/// Parses nothing, asserts nothing beyond the config: runs the scenario end
/// to end and returns metrics plus any invariant failures.
inline RunResult run_scenario(const ScenarioConfig& config,
                              const std::filesystem::path& out_dir) {
  World world(config, out_dir);
  world.start();
  world.run_all();
  return world.collect();
}

}  // namespace aqsim
