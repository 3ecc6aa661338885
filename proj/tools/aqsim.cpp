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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "aqsim/aqsim.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitAssertionFailure = 1;
constexpr int kExitConfigError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_warnings(const aqsim::ScenarioConfig& config) {
  for (const auto& warning : config.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
}

int cmd_check(const std::string& scenario_path) {
  try {
    const auto config = aqsim::parse_scenario(read_file(scenario_path));
    print_warnings(config);
    std::cout << "ok: " << config.nodes.size() << " nodes, "
              << config.materialize_links().size() << " links, duration "
              << config.duration_ms << " ms\n";
    return kExitPass;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override) {
  aqsim::ScenarioConfig config;
  try {
    config = aqsim::parse_scenario(read_file(scenario_path));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  print_warnings(config);
  if (seed_override) config.seed = *seed_override;

  try {
    const aqsim::RunResult result = aqsim::run_scenario(config, out_dir);
    aqsim::write_summary(result.metrics, std::cout);
    for (const auto& sample : result.violation_samples) {
      std::cerr << "violation: " << sample << "\n";
    }
    for (const auto& failure : result.failures) {
      std::cerr << "failed: " << failure << "\n";
    }
    return result.passed() ? kExitPass : kExitAssertionFailure;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return kExitConfigError;
  }
}

int cmd_report(const std::string& out_dir) {
  const auto path = std::filesystem::path(out_dir) / "metrics.txt";
  try {
    std::cout << read_file(path.string());
    return kExitPass;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic end-to-end simulator for a low-power sensor "
               "mesh feeding a store-and-forward gateway and a cloud ingest "
               "service"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed_override;

  auto* run = app.add_subcommand("run", "execute a scenario and emit metrics");
  run->add_option("--scenario", scenario_path, "scenario file")->required();
  run->add_option("--out", out_dir, "artifact output directory")->required();
  run->add_option("--seed", seed_override, "override the scenario seed");

  auto* check = app.add_subcommand("check", "parse and validate a scenario");
  check->add_option("--scenario", scenario_path, "scenario file")->required();

  auto* report = app.add_subcommand("report", "print the summary of a run");
  report->add_option("--out", out_dir, "artifact directory of a prior run")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(scenario_path, out_dir, seed_override);
  if (check->parsed()) return cmd_check(scenario_path);
  return cmd_report(out_dir);
}
