// Copyright 2026 The qreduce Authors
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
// qreduce: runs the reduction-postulate experiments from a JSON config.
//
//   qreduce run <config.json> [--out-dir DIR] [--seed N]
//   qreduce validate <config.json>
//   qreduce list-scenarios
//
// Exit status: 0 success, 2 config error, 3 numerical contract failure,
// 4 size cap exceeded.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qreduce/error.hpp"
#include "qreduce/scenarios.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitContract = 3;
constexpr int kExitCap = 4;

int exit_code_for(const qreduce::Error& e, bool during_run) {
  using qreduce::ErrorCode;
  switch (e.code()) {
    case ErrorCode::kCapExceeded:
      return kExitCap;
    case ErrorCode::kConfig:
      return kExitConfig;
    default:
      return during_run ? kExitContract : kExitConfig;
  }
}

int run(const std::string& config_path, const std::string& out_dir,
        std::optional<std::uint64_t> seed) {
  qreduce::ScenarioConfig cfg;
  try {
    cfg = qreduce::load_config(config_path);
  } catch (const qreduce::Error& e) {
    std::cerr << "qreduce: " << e.what() << '\n';
    return exit_code_for(e, false);
  }
  if (seed) cfg.seed = *seed;

  try {
    const qreduce::ScenarioOutput out = qreduce::run_scenario(cfg);
    qreduce::write_outputs(cfg, out, out_dir);
    for (const auto& f : out.contract_failures)
      std::cerr << "qreduce: contract failure: " << f << '\n';
    std::cout << qreduce::to_string(cfg.scenario) << ": wrote "
              << (std::filesystem::path(out_dir) / cfg.csv_path).string()
              << " and "
              << (std::filesystem::path(out_dir) / cfg.json_path).string()
              << '\n';
    return out.contract_failures.empty() ? kExitOk : kExitContract;
  } catch (const qreduce::Error& e) {
    std::cerr << "qreduce: " << e.what() << '\n';
    return exit_code_for(e, true);
  } catch (const std::exception& e) {
    std::cerr << "qreduce: " << e.what() << '\n';
    return kExitContract;
  }
}

int validate(const std::string& config_path) {
  try {
    const qreduce::ScenarioConfig cfg = qreduce::load_config(config_path);
    std::cout << "ok: " << qreduce::to_string(cfg.scenario) << '\n';
    return kExitOk;
  } catch (const qreduce::Error& e) {
    std::cerr << "qreduce: " << e.what() << '\n';
    return exit_code_for(e, false);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduction-postulate experiments: standard vs modified "
               "reduction, decoherence, consistent histories"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;

  auto* run_cmd = app.add_subcommand("run", "Run one scenario");
  run_cmd->add_option("config", config_path, "Scenario config (JSON)")
      ->required();
  run_cmd->add_option("--out-dir", out_dir,
                      "Directory for relative output paths");
  run_cmd->add_option("--seed", seed, "Override the config seed");

  auto* validate_cmd =
      app.add_subcommand("validate", "Parse and validate a config");
  validate_cmd->add_option("config", config_path, "Scenario config (JSON)")
      ->required();

  app.add_subcommand("list-scenarios", "Print the scenario tags");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (*run_cmd) return run(config_path, out_dir, seed);
  if (*validate_cmd) return validate(config_path);
  for (auto name : qreduce::scenario_names()) std::cout << name << '\n';
  return kExitOk;
}
