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
#include <string>
#include <vector>

#include "aqsim/mote/process.hpp"

namespace aqsim {
namespace {

struct Tick {
  int value = 0;
};

TEST_CASE("posted events reach the registered handler exactly once") {
  ProcessScheduler<Tick> sched;
  std::vector<int> seen;
  sched.register_process("sink", [&](const Tick& t) { seen.push_back(t.value); });
  sched.post("sink", Tick{1});
  sched.post("sink", Tick{2});
  REQUIRE(seen == std::vector<int>{1, 2});
  REQUIRE(sched.posted_count() == 2);
  REQUIRE(sched.delivered_count() == 2);
}

TEST_CASE("posting to an unknown process throws") {
  ProcessScheduler<Tick> sched;
  sched.register_process("known", [](const Tick&) {});
  REQUIRE(sched.has_process("known"));
  REQUIRE_FALSE(sched.has_process("unknown"));
  REQUIRE_THROWS_AS(sched.post("unknown", Tick{}), std::out_of_range);
  REQUIRE_THROWS_WITH(sched.post("unknown", Tick{}),
                      Catch::Matchers::ContainsSubstring("unknown"));
}

TEST_CASE("duplicate registration throws") {
  ProcessScheduler<Tick> sched;
  sched.register_process("p", [](const Tick&) {});
  REQUIRE_THROWS_AS(sched.register_process("p", [](const Tick&) {}),
                    std::invalid_argument);
}

TEST_CASE("posts from inside a handler are deferred until it returns") {
  ProcessScheduler<Tick> sched;
  std::vector<std::string> log;
  sched.register_process("a", [&](const Tick&) {
    log.push_back("a-start");
    sched.post("b", Tick{});
    log.push_back("a-end");
  });
  sched.register_process("b", [&](const Tick&) { log.push_back("b"); });
  sched.post("a", Tick{});
  REQUIRE(log == std::vector<std::string>{"a-start", "a-end", "b"});
}

TEST_CASE("nested posts preserve posting order across processes") {
  ProcessScheduler<Tick> sched;
  std::vector<int> order;
  sched.register_process("first", [&](const Tick&) {
    order.push_back(1);
    sched.post("third", Tick{});
    sched.post("second", Tick{});
  });
  sched.register_process("second", [&](const Tick&) { order.push_back(3); });
  sched.register_process("third", [&](const Tick&) { order.push_back(2); });
  sched.post("first", Tick{});
  REQUIRE(order == std::vector<int>{1, 2, 3});
  REQUIRE(sched.delivered_count() == 3);
}

TEST_CASE("chained handlers drain to completion in one post") {
  ProcessScheduler<Tick> sched;
  int depth_reached = 0;
  sched.register_process("relay", [&](const Tick& t) {
    depth_reached = t.value;
    if (t.value < 10) sched.post("relay", Tick{t.value + 1});
  });
  sched.post("relay", Tick{1});
  REQUIRE(depth_reached == 10);
  REQUIRE(sched.delivered_count() == 10);
}

}  // namespace
}  // namespace aqsim
