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
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qreduce/decoherence.hpp"
#include "qreduce/histories.hpp"
#include "qreduce/reduction.hpp"
#include "qreduce/state.hpp"

namespace qreduce {

enum class Scenario {
  kComparePostulates,
  kDecoherenceSweep,
  kWindowScan,
  kHistoriesCheck,
  kLambdaPositivityMap,
};

const std::vector<std::string_view>& scenario_names();
std::string_view to_string(Scenario s) noexcept;
// Throws kConfig for unknown names.
Scenario parse_scenario(std::string_view name);

struct ComparePostulatesParams {
  double a2 = 0.5;
  std::vector<double> z_values;
  std::vector<double> lambdas;
};

struct DecoherenceSweepParams {
  Complex a{1.0 / 1.4142135623730951, 0.0};
  Complex b{1.0 / 1.4142135623730951, 0.0};
  std::vector<std::size_t> n_values;
  std::size_t trials = 200;
  double t = 1.0;
};

struct WindowScanParams {
  double a2 = 0.5;
  std::vector<double> z_values;
  // Angular step per z value (same length as z_values).
  std::vector<double> delta_theta;
  double tol = kDefaultEventTolerance;
  // Half-width of the scanned interval around +x; derived from z when unset.
  std::optional<double> half_width;
};

struct SlotSpec {
  double time = 0.0;
  ComplexMatrix observable;
  std::vector<IndexSet> partition;
};

struct HistoriesCheckParams {
  std::size_t dim = 2;
  ComplexMatrix initial_state;
  ComplexMatrix hamiltonian;
  std::vector<SlotSpec> slots;
  double tol = kDefaultConsistencyTolerance;
  double quasi_threshold = kDefaultQuasiThreshold;
};

struct LambdaPositivityMapParams {
  std::vector<double> lambda_grid;
  std::vector<double> ratio_grid;
};

using ScenarioParams =
    std::variant<ComparePostulatesParams, DecoherenceSweepParams,
                 WindowScanParams, HistoriesCheckParams,
                 LambdaPositivityMapParams>;

struct ScenarioConfig {
  Scenario scenario = Scenario::kComparePostulates;
  std::uint64_t seed = 0;
  ScenarioParams params;
  std::string csv_path;
  std::string json_path;
};

// Parses and fully validates a config document. Throws kConfig for missing or
// malformed parameters and kCapExceeded when a size cap is violated.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::filesystem::path& path);

HistoryFamily build_history_family(const HistoriesCheckParams& params);

// --- typed results -------------------------------------------------------

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

struct CompareRow {
  double z;
  double d_reduce;
  double d_unread_standard;
  std::vector<double> d_unread_lambda;  // one per configured lambda
};

struct ComparePostulatesResult {
  std::vector<CompareRow> rows;
  LinearFit d_reduce_fit;
};

struct DecoherenceRow {
  SweepRow sweep;
  double damping_ratio;
};

struct DecoherenceSweepResult {
  std::vector<DecoherenceRow> rows;
  // ln(median |z|) against N over rows with median > 0
  LinearFit log_fit;
  double max_oracle_mismatch = 0.0;
};

struct ScanPoint {
  double theta;
  double p;
  EventClass cls;
};

struct WindowMeasurement {
  double z;
  double delta_theta;
  std::vector<ScanPoint> points;
  double width = 0.0;
  double center = 0.0;
  // Direction of the rotated Bloch vector in the x-z plane and the exact
  // angular width of the region where n . r >= 1.
  double expected_center = 0.0;
  double expected_width = 0.0;
  bool resolved = true;   // at least 10 scan points inside the window
  bool truncated = false; // window reaches the scan boundary
};

struct WindowScanResult {
  std::vector<WindowMeasurement> windows;
  double fitted_slope = 0.0;    // least squares width = c z through the origin
  double analytic_slope = 0.0;  // 2 / |a|^2
};

struct HistoriesCheckResult {
  ConsistencyReport report;
  double additivity_residual = 0.0;
  std::optional<double> marginalization_residual;
};

struct LambdaPoint {
  double lambda;
  double ratio;
  double min_eigenvalue;
  bool positive;
};

struct LambdaPositivityMapResult {
  std::vector<LambdaPoint> points;
};

ComparePostulatesResult run_compare_postulates(const ComparePostulatesParams& p);
DecoherenceSweepResult run_decoherence_sweep(const DecoherenceSweepParams& p,
                                             std::uint64_t seed);
WindowScanResult run_window_scan(const WindowScanParams& p);
HistoriesCheckResult run_histories_check(const HistoriesCheckParams& p);
LambdaPositivityMapResult run_lambda_positivity_map(
    const LambdaPositivityMapParams& p);

// Qubit state reached by the window-scan protocol before the second
// measurement: modified reduction on |up> of [[a2, z], [z*, 1 - a2]] followed
// by the half-turn exp(-i sigma_y pi/4) that carries +z to +x.
DensityMatrix window_scan_state(double a2, Complex z);

// --- rendering -----------------------------------------------------------

struct ScenarioOutput {
  std::string csv;
  nlohmann::json summary;
  // Numerical contracts that did not hold; non-empty means exit status 3.
  std::vector<std::string> contract_failures;
};

ScenarioOutput run_scenario(const ScenarioConfig& cfg);

// Writes csv/json files; relative paths are resolved against out_dir.
void write_outputs(const ScenarioConfig& cfg, const ScenarioOutput& out,
                   const std::filesystem::path& out_dir);

// 17 significant digits.
std::string format_number(double v);

}  // namespace qreduce
