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

#include <stdexcept>
#include <vector>

#include "aqsim/sim/engine.hpp"

namespace aqsim {
namespace {

TEST_CASE("events fire in time order") {
  Engine engine(1);
  std::vector<int> order;
  engine.schedule(30, 0, [&] { order.push_back(3); });
  engine.schedule(10, 0, [&] { order.push_back(1); });
  engine.schedule(20, 0, [&] { order.push_back(2); });
  const std::size_t n = engine.run_until(100);
  REQUIRE(n == 3);
  REQUIRE(order == std::vector<int>{1, 2, 3});
}

TEST_CASE("simultaneous events dispatch in scheduling order") {
  Engine engine(1);
  std::vector<int> order;
  for (int i = 0; i < 5; ++i) {
    engine.schedule(50, 0, [&order, i] { order.push_back(i); });
  }
  engine.run_until(50);
  REQUIRE(order == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("run_until is inclusive of its bound and advances the clock") {
  Engine engine(1);
  bool fired = false;
  engine.schedule(100, 0, [&] { fired = true; });
  engine.run_until(99);
  REQUIRE_FALSE(fired);
  REQUIRE(engine.now() == 99);
  engine.run_until(100);
  REQUIRE(fired);
  REQUIRE(engine.now() == 100);
}

TEST_CASE("clock advances to the bound even with no events") {
  Engine engine(1);
  REQUIRE(engine.run_until(12345) == 0);
  REQUIRE(engine.now() == 12345);
  REQUIRE_FALSE(engine.pending());
}

TEST_CASE("scheduling in the past throws") {
  Engine engine(1);
  engine.schedule(10, 0, [] {});
  engine.run_until(10);
  REQUIRE_THROWS_AS(engine.schedule(9, 0, [] {}), std::invalid_argument);
  REQUIRE_NOTHROW(engine.schedule(10, 0, [] {}));  // "now" is allowed
}

TEST_CASE("schedule_in is relative to the current time") {
  Engine engine(1);
  SimTime fired_at = 0;
  engine.schedule(40, 0, [&] {
    engine.schedule_in(5, 0, [&] { fired_at = engine.now(); });
  });
  engine.run_until(100);
  REQUIRE(fired_at == 45);
}

TEST_CASE("cancelled events are skipped and not counted") {
  Engine engine(1);
  int runs = 0;
  const EventHandle keep = engine.schedule(10, 0, [&] { ++runs; });
  const EventHandle drop = engine.schedule(10, 0, [&] { ++runs; });
  (void)keep;
  engine.cancel(drop);
  REQUIRE(engine.run_until(100) == 1);
  REQUIRE(runs == 1);
}

TEST_CASE("events scheduled during dispatch run within the same window") {
  Engine engine(1);
  std::vector<int> order;
  engine.schedule(10, 0, [&] {
    order.push_back(1);
    engine.schedule(10, 0, [&] { order.push_back(2); });  // same instant
    engine.schedule(20, 0, [&] { order.push_back(3); });
  });
  engine.run_until(20);
  REQUIRE(order == std::vector<int>{1, 2, 3});
}

TEST_CASE("trace records dispatch order when enabled") {
  Engine engine(1);
  engine.enable_trace(true);
  engine.schedule(5, 7, [] {});
  engine.schedule(3, 9, [] {});
  engine.run_until(10);
  REQUIRE(engine.trace().size() == 2);
  REQUIRE(engine.trace()[0] == Engine::TraceEntry{3, 1, 9});
  REQUIRE(engine.trace()[1] == Engine::TraceEntry{5, 0, 7});
}

TEST_CASE("post-dispatch hook fires once per dispatched event") {
  Engine engine(1);
  int hooks = 0;
  engine.set_post_dispatch_hook([&] { ++hooks; });
  engine.schedule(1, 0, [] {});
  const EventHandle dropped = engine.schedule(2, 0, [] {});
  engine.cancel(dropped);
  engine.schedule(3, 0, [] {});
  engine.run_until(10);
  REQUIRE(hooks == 2);
}

TEST_CASE("rng streams are owned by the engine and stable per key") {
  Engine engine(77);
  const std::uint64_t a1 = engine.rng(1).next_u64();
  const std::uint64_t b1 = engine.rng(2).next_u64();
  REQUIRE(a1 != b1);

  Engine again(77);
  REQUIRE(again.rng(1).next_u64() == a1);
  REQUIRE(again.rng(2).next_u64() == b1);
  REQUIRE(again.master_seed() == 77);
}

}  // namespace
}  // namespace aqsim
