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

#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "aqsim/cloud/cloud.hpp"
#include "aqsim/mote/adc.hpp"
#include "aqsim/sim/engine.hpp"

namespace aqsim {
namespace {

UploadRecord make_record(NodeId mote, std::uint32_t counter,
                         std::uint32_t no2_we = 100, std::uint32_t no2_ae = 200,
                         std::uint32_t o3_we = 300, std::uint32_t o3_ae = 400,
                         SimTime receive_time = 1000) {
  SampleRecord rec;
  rec.counter = counter;
  rec.no2_we = no2_we;
  rec.no2_ae = no2_ae;
  rec.o3_we = o3_we;
  rec.o3_ae = o3_ae;
  UploadRecord upload;
  upload.mote_id = mote;
  upload.receive_time_ms = receive_time;
  upload.wire = serialize_sample(rec);
  return upload;
}

TEST_CASE("duplicate counters from one mote are suppressed") {
  CloudService cloud;
  UploadBatch batch;
  batch.records.push_back(make_record(1, 42));
  batch.records.push_back(make_record(1, 42));
  batch.records.push_back(make_record(2, 42));  // other mote, same counter

  const auto result = cloud.ingest_batch(batch, 0);
  REQUIRE(result.accepted);
  REQUIRE(result.fresh == 2);
  REQUIRE(result.suppressed == 1);
  REQUIRE(cloud.stored_count() == 2);
  REQUIRE(cloud.has_record(1, 42));
  REQUIRE(cloud.has_record(2, 42));

  // Replaying the whole batch later changes nothing.
  const auto replay = cloud.ingest_batch(batch, 500);
  REQUIRE(replay.accepted);
  REQUIRE(replay.fresh == 0);
  REQUIRE(replay.suppressed == 3);
  REQUIRE(cloud.stored_count() == 2);
  REQUIRE(cloud.stats().duplicates_suppressed == 4);
}

TEST_CASE("outage windows are half-open and refusals leave no trace") {
  OutageSchedule outages;
  outages.add_window(1000, 2000);
  outages.add_window(5000, 6000);
  CloudService cloud(std::move(outages));

  REQUIRE_FALSE(cloud.in_outage(999));
  REQUIRE(cloud.in_outage(1000));  // start inclusive
  REQUIRE(cloud.in_outage(1999));
  REQUIRE_FALSE(cloud.in_outage(2000));  // end exclusive
  REQUIRE_FALSE(cloud.in_outage(4999));
  REQUIRE(cloud.in_outage(5000));
  REQUIRE_FALSE(cloud.in_outage(6000));

  UploadBatch batch;
  batch.records.push_back(make_record(1, 0));
  const auto refused = cloud.ingest_batch(batch, 1500);
  REQUIRE_FALSE(refused.accepted);
  REQUIRE(refused.fresh == 0);
  REQUIRE(cloud.stored_count() == 0);
  REQUIRE(cloud.stats().batches_refused == 1);
  REQUIRE(cloud.stats().batches_accepted == 0);

  const auto accepted = cloud.ingest_batch(batch, 2000);
  REQUIRE(accepted.accepted);
  REQUIRE(cloud.stored_count() == 1);
}

TEST_CASE("outage windows must be ordered, disjoint and non-empty") {
  OutageSchedule outages;
  REQUIRE_THROWS_AS(outages.add_window(100, 100), std::invalid_argument);
  REQUIRE_THROWS_AS(outages.add_window(100, 50), std::invalid_argument);
  outages.add_window(100, 200);
  REQUIRE_THROWS_AS(outages.add_window(150, 300), std::invalid_argument);
  REQUIRE_THROWS_AS(outages.add_window(50, 80), std::invalid_argument);
  REQUIRE_NOTHROW(outages.add_window(200, 300));  // windows may touch
}

TEST_CASE("millivolt columns are the exact conversion of the raw counts") {
  CloudService cloud;
  UploadBatch batch;
  batch.records.push_back(make_record(3, 0, 0, 1, 2048, 4095));
  REQUIRE(cloud.ingest_batch(batch, 0).fresh == 1);

  const auto series = cloud.query_series(3, 0, 2000);
  REQUIRE(series.size() == 1);
  const IngestRecord& row = series[0];
  REQUIRE(row.raw[0] == 0);
  REQUIRE(row.raw[1] == 1);
  REQUIRE(row.raw[2] == 2048);
  REQUIRE(row.raw[3] == 4095);
  REQUIRE(row.mv[0] == 0.0);
  REQUIRE(row.mv[1] == adc_convert(1));
  REQUIRE(row.mv[2] == adc_convert(2048));
  REQUIRE(row.mv[3] == 3300.0);
}

TEST_CASE("raw counts past the converter range are rejected at ingest") {
  CloudService cloud;
  UploadBatch batch;
  batch.records.push_back(make_record(3, 0, 4096));  // beats the checksum
  batch.records.push_back(make_record(3, 1));

  const auto result = cloud.ingest_batch(batch, 0);
  REQUIRE(result.accepted);
  REQUIRE(result.fresh == 1);
  REQUIRE(cloud.stats().invalid_rejected == 1);
  REQUIRE_FALSE(cloud.has_record(3, 0));
  REQUIRE(cloud.has_record(3, 1));
}

TEST_CASE("event timestamps rebuild from the sampling phase and counter") {
  CloudService cloud{OutageSchedule{}, 4000};
  cloud.set_phase(7, 4321);
  UploadBatch batch;
  batch.records.push_back(make_record(7, 10));
  batch.records.push_back(make_record(8, 10));  // no phase registered
  cloud.ingest_batch(batch, 900);

  const auto with_phase = cloud.query_series(7, 0, 2000);
  REQUIRE(with_phase.size() == 1);
  REQUIRE(with_phase[0].event_time_ms == 4321 + 10 * 4000);
  REQUIRE(with_phase[0].ingest_time_ms == 900);
  REQUIRE(with_phase[0].receive_time_ms == 1000);

  const auto without_phase = cloud.query_series(8, 0, 2000);
  REQUIRE(without_phase.size() == 1);
  REQUIRE(without_phase[0].event_time_ms == 0);
}

TEST_CASE("series queries are counter-ordered and windowed on receive time") {
  CloudService cloud;
  UploadBatch batch;
  // Inserted out of counter order, with spread receive times.
  batch.records.push_back(make_record(5, 3, 10, 10, 10, 10, 3000));
  batch.records.push_back(make_record(5, 1, 10, 10, 10, 10, 1000));
  batch.records.push_back(make_record(5, 2, 10, 10, 10, 10, 2000));
  batch.records.push_back(make_record(5, 0, 10, 10, 10, 10, 4000));
  batch.records.push_back(make_record(6, 0, 10, 10, 10, 10, 1000));
  cloud.ingest_batch(batch, 0);

  const auto all = cloud.query_series(5, 0, 10000);
  REQUIRE(all.size() == 4);
  for (std::size_t i = 0; i + 1 < all.size(); ++i) {
    REQUIRE(all[i].counter < all[i + 1].counter);
  }

  // Half-open receive window [1000, 3000) keeps counters 1 and 2 only.
  const auto windowed = cloud.query_series(5, 1000, 3000);
  REQUIRE(windowed.size() == 2);
  REQUIRE(windowed[0].counter == 1);
  REQUIRE(windowed[1].counter == 2);

  REQUIRE(cloud.query_series(99, 0, 10000).empty());
  REQUIRE(cloud.query_series(5, 5000, 5000).empty());
  REQUIRE_THROWS_AS(cloud.query_series(5, 2000, 1000), std::invalid_argument);
}

TEST_CASE("completeness reports name the missing counters") {
  CloudService cloud;
  UploadBatch batch;
  batch.records.push_back(make_record(4, 0));
  batch.records.push_back(make_record(4, 1));
  batch.records.push_back(make_record(4, 3));
  batch.records.push_back(make_record(4, 1));  // duplicate
  cloud.ingest_batch(batch, 0);

  const auto report = cloud.completeness_report({{4, 5}, {9, 2}});
  const MoteCompleteness& four = report.at(4);
  REQUIRE(four.expected == 5);
  REQUIRE(four.received == 3);
  REQUIRE(four.suppressed == 1);
  REQUIRE(four.missing == std::vector<std::uint32_t>{2, 4});

  const MoteCompleteness& nine = report.at(9);
  REQUIRE(nine.expected == 2);
  REQUIRE(nine.received == 0);
  REQUIRE(nine.missing == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("the exported table pins its header and number format") {
  CloudService cloud;
  UploadBatch batch;
  batch.records.push_back(make_record(1, 0, 2048, 1, 0, 4095, 750));
  cloud.ingest_batch(batch, 0);

  std::ostringstream os;
  cloud.export_csv(os);
  REQUIRE(os.str() ==
          "mote_id,counter,receive_time_ms,no2_we_raw,no2_we_mv,no2_ae_raw,"
          "no2_ae_mv,o3_we_raw,o3_we_mv,o3_ae_raw,o3_ae_mv\n"
          "1,0,750,2048,1650.402930403,1,0.805860806,0,0.000000000,"
          "4095,3300.000000000\n");
}

TEST_CASE("rows export ordered by mote, then counter") {
  CloudService cloud;
  UploadBatch batch;
  batch.records.push_back(make_record(2, 1));
  batch.records.push_back(make_record(1, 5));
  batch.records.push_back(make_record(2, 0));
  batch.records.push_back(make_record(1, 3));
  cloud.ingest_batch(batch, 0);

  std::ostringstream os;
  cloud.export_csv(os);
  std::istringstream lines(os.str());
  std::string line;
  std::getline(lines, line);  // header
  std::vector<std::string> starts;
  while (std::getline(lines, line)) {
    starts.push_back(line.substr(0, 4));
  }
  REQUIRE(starts == std::vector<std::string>{"1,3,", "1,5,", "2,0,", "2,1,"});
}

TEST_CASE("the upload channel spends half the round trip each way") {
  Engine engine(1);
  CloudService service;
  CloudLink link(engine, service);  // default 100 ms RTT
  REQUIRE(link.rtt() == 100);

  UploadBatch batch;
  batch.records.push_back(make_record(1, 0));
  SimTime completed_at = 0;
  IngestResult seen;
  engine.schedule(400, 1, [&] {
    link.submit(batch, [&](const IngestResult& result) {
      completed_at = engine.now();
      seen = result;
    });
  });
  engine.run_until(1000);

  REQUIRE(completed_at == 500);
  REQUIRE(seen.accepted);
  REQUIRE(seen.fresh == 1);
  // The row's ingest time is the witness of when the service side ran.
  const auto series = service.query_series(1, 0, 100000);
  REQUIRE(series.size() == 1);
  REQUIRE(series[0].ingest_time_ms == 450);
}

}  // namespace
}  // namespace aqsim
