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

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aqsim/net/rpl_types.hpp"
#include "aqsim/sim/time.hpp"

namespace aqsim {

/// Parse or validation failure, carrying the 1-based line number when the
/// problem is tied to a specific line (0 for document-level problems).
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(int line, const std::string& message)
      : std::runtime_error(line > 0
                               ? "line " + std::to_string(line) + ": " + message
                               : message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

struct NodeSpec {
  NodeId id = 0;
  double x = 0.0;
  double y = 0.0;
  bool is_border = false;
};

struct LinkSpec {
  NodeId a = 0;
  NodeId b = 0;
  double loss = 0.0;
};

/// A parsed scenario file. The format is line-oriented `key value...`;
/// `#` starts a comment, blank lines are skipped. Keys:
///
///   seed <u64>                    master RNG seed (default 1)
///   duration <ms>                 sampling horizon, required, > 0
///   period <ms>                   sampling period (default 4000)
///   range <r>                     unit-disk radio range (0 = links only)
///   default_loss <p>              loss for unit-disk links (default 0)
///   node <id> <x> <y> [border|mote]   nodes come before links that use them
///   link <a> <b> <p>              explicit link / unit-disk override
///   outage <start_ms> <end_ms>    cloud outage window, sorted, disjoint
///   gateway_boot <ms>             gateway boot time (default 0)
///   batch <n>                     upload batch size (default 100)
///   buffer_capacity <n>           override (default mote_count x 21600)
///   serial_error <p>              per-byte serial corruption probability
///   drain <ms>                    extra run time after duration/outages
///   expect_completeness <pct>     assert minimum per-mote completeness
struct ScenarioConfig {
  std::uint64_t seed = 1;
  SimTime duration_ms = 0;
  SimTime period_ms = 4000;
  double range = 0.0;
  double default_loss = 0.0;
  std::vector<NodeSpec> nodes;
  std::vector<LinkSpec> explicit_links;
  std::vector<std::pair<SimTime, SimTime>> outages;
  SimTime gateway_boot_ms = 0;
  std::size_t batch_size = 100;
  std::optional<std::size_t> buffer_capacity;
  double serial_error = 0.0;
  SimTime drain_ms = 600 * kSecond;
  std::optional<double> expect_completeness;
  std::vector<std::string> warnings;

  NodeId border_id() const {
    for (const NodeSpec& node : nodes) {
      if (node.is_border) return node.id;
    }
    throw std::logic_error("config has no border node");
  }

  std::vector<NodeId> mote_ids() const {
    std::vector<NodeId> out;
    for (const NodeSpec& node : nodes) {
      if (!node.is_border) out.push_back(node.id);
    }
    return out;
  }

  /// Unit-disk links from positions and range, with explicit links applied
  /// on top (overriding loss where both exist). Normalized to a < b and
  /// sorted, so wiring order is deterministic.
  std::vector<LinkSpec> materialize_links() const {
    std::map<std::pair<NodeId, NodeId>, double> links;
    if (range > 0.0) {
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
          const double dx = nodes[i].x - nodes[j].x;
          const double dy = nodes[i].y - nodes[j].y;
          if (std::hypot(dx, dy) <= range) {
            const auto key = std::minmax(nodes[i].id, nodes[j].id);
            links[{key.first, key.second}] = default_loss;
          }
        }
      }
    }
    for (const LinkSpec& link : explicit_links) {
      const auto key = std::minmax(link.a, link.b);
      links[{key.first, key.second}] = link.loss;
    }
    std::vector<LinkSpec> out;
    out.reserve(links.size());
    for (const auto& [key, loss] : links) {
      out.push_back(LinkSpec{key.first, key.second, loss});
    }
    return out;
  }

  /// Per-mote sample budget: how many samples each mote takes. The sampling
  /// window is `duration_ms`; the first sample lands one period (plus
  /// sub-second jitter) after start, so the budget is duration / period.
  std::uint64_t samples_per_mote() const {
    return period_ms == 0 ? 0 : duration_ms / period_ms;
  }

  /// Latest virtual time the run must reach: sampling window, then any
  /// outage tail, then the drain allowance for uploads and replay.
  SimTime horizon_ms() const {
    SimTime end = duration_ms;
    for (const auto& [start, stop] : outages) {
      end = std::max(end, stop);
    }
    return end + drain_ms;
  }
};

namespace detail {

inline std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string token;
  while (in >> token) {
    if (token[0] == '#') break;
    tokens.push_back(token);
  }
  return tokens;
}

inline std::uint64_t parse_u64(const std::string& text, int line,
                               const char* what) {
  try {
    std::size_t used = 0;
    const std::uint64_t value = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ScenarioError(line, std::string("bad ") + what + ": '" + text + "'");
  }
}

inline double parse_real(const std::string& text, int line, const char* what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(value)) {
      throw std::invalid_argument(text);
    }
    return value;
  } catch (const std::exception&) {
    throw ScenarioError(line, std::string("bad ") + what + ": '" + text + "'");
  }
}

inline double parse_probability(const std::string& text, int line,
                                const char* what) {
  const double p = parse_real(text, line, what);
  if (p < 0.0 || p > 1.0) {
    throw ScenarioError(line,
                        std::string(what) + " must be in [0, 1], got " + text);
  }
  return p;
}

inline void require_arity(const std::vector<std::string>& tokens,
                          std::size_t min_args, std::size_t max_args,
                          int line) {
  const std::size_t args = tokens.size() - 1;
  if (args < min_args || args > max_args) {
    throw ScenarioError(line, "wrong number of arguments for '" + tokens[0] +
                                  "' (got " + std::to_string(args) + ")");
  }
}

}  // namespace detail

/// Parses and validates scenario text. Throws ScenarioError on the first
/// problem; recoverable topology oddities (nodes unreachable from owner
/// border router) land in config.warnings instead.
inline ScenarioConfig parse_scenario(const std::string& text) {
  using namespace detail;
  ScenarioConfig config;
  std::set<NodeId> seen_ids;
  std::istringstream in(text);
  std::string raw_line;
  int line_no = 0;

  while (std::getline(in, raw_line)) {
    ++line_no;
    const auto tokens = split_tokens(raw_line);
    if (tokens.empty()) continue;
    const std::string& key = tokens[0];

    if (key == "seed") {
      require_arity(tokens, 1, 1, line_no);
      config.seed = parse_u64(tokens[1], line_no, "seed");
    } else if (key == "duration") {
      require_arity(tokens, 1, 1, line_no);
      config.duration_ms = parse_u64(tokens[1], line_no, "duration");
      if (config.duration_ms == 0) {
        throw ScenarioError(line_no, "duration must be > 0");
      }
    } else if (key == "period") {
      require_arity(tokens, 1, 1, line_no);
      config.period_ms = parse_u64(tokens[1], line_no, "period");
      if (config.period_ms == 0) {
        throw ScenarioError(line_no, "period must be > 0");
      }
    } else if (key == "range") {
      require_arity(tokens, 1, 1, line_no);
      config.range = parse_real(tokens[1], line_no, "range");
      if (config.range < 0.0) {
        throw ScenarioError(line_no, "range must be >= 0");
      }
    } else if (key == "default_loss") {
      require_arity(tokens, 1, 1, line_no);
      config.default_loss =
          parse_probability(tokens[1], line_no, "default_loss");
    } else if (key == "node") {
      require_arity(tokens, 3, 4, line_no);
      NodeSpec node;
      node.id = static_cast<NodeId>(parse_u64(tokens[1], line_no, "node id"));
      node.x = parse_real(tokens[2], line_no, "node x");
      node.y = parse_real(tokens[3], line_no, "node y");
      if (tokens.size() == 5) {
        if (tokens[4] == "border") {
          node.is_border = true;
        } else if (tokens[4] != "mote") {
          throw ScenarioError(line_no, "node kind must be border or mote");
        }
      }
      if (!seen_ids.insert(node.id).second) {
        throw ScenarioError(line_no, "duplicate node id " +
                                         std::to_string(node.id));
      }
      config.nodes.push_back(node);
    } else if (key == "link") {
      require_arity(tokens, 3, 3, line_no);
      LinkSpec link;
      link.a = static_cast<NodeId>(parse_u64(tokens[1], line_no, "link a"));
      link.b = static_cast<NodeId>(parse_u64(tokens[2], line_no, "link b"));
      link.loss = parse_probability(tokens[3], line_no, "link loss");
      if (link.a == link.b) {
        throw ScenarioError(line_no, "link endpoints must differ");
      }
      if (!seen_ids.count(link.a) || !seen_ids.count(link.b)) {
        throw ScenarioError(line_no, "link references undeclared node");
      }
      config.explicit_links.push_back(link);
    } else if (key == "outage") {
      require_arity(tokens, 2, 2, line_no);
      const SimTime start = parse_u64(tokens[1], line_no, "outage start");
      const SimTime end = parse_u64(tokens[2], line_no, "outage end");
      if (end <= start) {
        throw ScenarioError(line_no, "outage end must be after start");
      }
      if (!config.outages.empty() && start < config.outages.back().second) {
        throw ScenarioError(line_no, "outage windows must be sorted, disjoint");
      }
      config.outages.emplace_back(start, end);
    } else if (key == "gateway_boot") {
      require_arity(tokens, 1, 1, line_no);
      config.gateway_boot_ms = parse_u64(tokens[1], line_no, "gateway_boot");
    } else if (key == "batch") {
      require_arity(tokens, 1, 1, line_no);
      config.batch_size = parse_u64(tokens[1], line_no, "batch");
      if (config.batch_size == 0) {
        throw ScenarioError(line_no, "batch must be > 0");
      }
    } else if (key == "buffer_capacity") {
      require_arity(tokens, 1, 1, line_no);
      config.buffer_capacity =
          parse_u64(tokens[1], line_no, "buffer_capacity");
    } else if (key == "serial_error") {
      require_arity(tokens, 1, 1, line_no);
      config.serial_error =
          parse_probability(tokens[1], line_no, "serial_error");
    } else if (key == "drain") {
      require_arity(tokens, 1, 1, line_no);
      config.drain_ms = parse_u64(tokens[1], line_no, "drain");
    } else if (key == "expect_completeness") {
      require_arity(tokens, 1, 1, line_no);
      const double pct =
          parse_real(tokens[1], line_no, "expect_completeness");
      if (pct < 0.0 || pct > 100.0) {
        throw ScenarioError(line_no, "expect_completeness must be 0..100");
      }
      config.expect_completeness = pct;
    } else {
      throw ScenarioError(line_no, "unknown key '" + key + "'");
    }
  }

  if (config.duration_ms == 0) {
    throw ScenarioError(0, "duration is required");
  }
  int borders = 0;
  for (const NodeSpec& node : config.nodes) {
    borders += node.is_border ? 1 : 0;
  }
  if (borders != 1) {
    throw ScenarioError(0, "scenario needs exactly one border node, found " +
                               std::to_string(borders));
  }
  if (config.mote_ids().empty()) {
    throw ScenarioError(0, "scenario needs at least one mote");
  }

  // Reachability sweep over the materialized radio graph: a mote cut off
  // from the border router can never deliver, which is worth a warning but
  // may be the very point of the scenario.
  std::map<NodeId, std::vector<NodeId>> adjacency;
  for (const LinkSpec& link : config.materialize_links()) {
    adjacency[link.a].push_back(link.b);
    adjacency[link.b].push_back(link.a);
  }
  std::set<NodeId> reached;
  std::queue<NodeId> frontier;
  frontier.push(config.border_id());
  reached.insert(config.border_id());
  while (!frontier.empty()) {
    const NodeId at = frontier.front();
    frontier.pop();
    for (NodeId next : adjacency[at]) {
      if (reached.insert(next).second) frontier.push(next);
    }
  }
  for (const NodeSpec& node : config.nodes) {
    if (!reached.count(node.id)) {
      config.warnings.push_back("node " + std::to_string(node.id) +
                                " is unreachable from the border router");
    }
  }
  return config;
}

}  // namespace aqsim
