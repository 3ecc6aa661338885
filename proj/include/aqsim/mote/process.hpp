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
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace aqsim {

/// Cooperative event dispatch between named processes on one node, in the
/// style of a small embedded OS: a post enqueues, and the event reaches the
/// target handler at the same virtual instant once the posting handler has
/// returned. Handlers must not block; posts from within a handler are
/// delivered in posting order.
template <typename Event>
class ProcessScheduler {
 public:
  using Handler = std::function<void(const Event&)>;

  void register_process(const std::string& id, Handler handler) {
    if (processes_.count(id)) {
      throw std::invalid_argument("process id already registered: " + id);
    }
    processes_[id] = std::move(handler);
  }

  bool has_process(const std::string& id) const {
    return processes_.count(id) != 0;
  }

  /// Queues an event for `target`. Throws std::out_of_range when no process
  /// is registered under that id (a configuration fault at the call site).
  void post(const std::string& target, Event event) {
    if (!processes_.count(target)) {
      throw std::out_of_range("no process registered under id: " + target);
    }
    queue_.emplace_back(target, std::move(event));
    ++posted_;
    if (!dispatching_) drain();
  }

  std::uint64_t posted_count() const { return posted_; }
  std::uint64_t delivered_count() const { return delivered_; }

 private:
  void drain() {
    dispatching_ = true;
    while (!queue_.empty()) {
      auto [target, event] = std::move(queue_.front());
      queue_.pop_front();
      ++delivered_;
      processes_.at(target)(event);
    }
    dispatching_ = false;
  }

  std::map<std::string, Handler> processes_;
  std::deque<std::pair<std::string, Event>> queue_;
  bool dispatching_ = false;
  std::uint64_t posted_ = 0;
  std::uint64_t delivered_ = 0;
};

}  // namespace aqsim
