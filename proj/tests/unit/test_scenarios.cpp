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
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qreduce/error.hpp"
#include "qreduce/scenarios.hpp"
#include "support/oracles.hpp"

namespace qreduce {
namespace {

using nlohmann::json;

const std::filesystem::path kConfigDir = QREDUCE_TEST_CONFIG_DIR;

ErrorCode parse_error(const json& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kContractViolation;
}

json compare_doc() {
  return {{"scenario", "ComparePostulates"},
          {"seed", 3},
          {"params", {{"a2", 0.5}, {"z_values", {0.0, 1e-3}}, {"lambdas", {0.0, 1.0}}}}};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

TEST(ScenarioNames, RoundTrip) {
  ASSERT_EQ(scenario_names().size(), 5u);
  for (auto name : scenario_names())
    EXPECT_EQ(to_string(parse_scenario(name)), name);
  try {
    parse_scenario("Nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

TEST(ParseConfig, DefaultsAndOutputs) {
  const ScenarioConfig cfg = parse_config(compare_doc());
  EXPECT_EQ(cfg.scenario, Scenario::kComparePostulates);
  EXPECT_EQ(cfg.seed, 3u);
  EXPECT_EQ(cfg.csv_path, "ComparePostulates.csv");
  EXPECT_EQ(cfg.json_path, "ComparePostulates.json");
  json doc = compare_doc();
  doc["outputs"] = {{"csv", "a/b.csv"}, {"json", "c.json"}};
  const ScenarioConfig custom = parse_config(doc);
  EXPECT_EQ(custom.csv_path, "a/b.csv");
  EXPECT_EQ(custom.json_path, "c.json");
}

TEST(ParseConfig, Errors) {
  json doc = compare_doc();
  doc.erase("scenario");
  EXPECT_EQ(parse_error(doc), ErrorCode::kConfig);
  doc = compare_doc();
  doc["scenario"] = "Unknown";
  EXPECT_EQ(parse_error(doc), ErrorCode::kConfig);
  doc = compare_doc();
  doc["seed"] = -1;
  EXPECT_EQ(parse_error(doc), ErrorCode::kConfig);
  doc = compare_doc();
  doc["params"]["z_values"] = "x";
  EXPECT_EQ(parse_error(doc), ErrorCode::kConfig);
  doc = compare_doc();
  doc["params"]["a2"] = 1.5;
  EXPECT_EQ(parse_error(doc), ErrorCode::kConfig);
  doc = compare_doc();
  doc["outputs"] = {{"csv", 4}};
  EXPECT_EQ(parse_error(doc), ErrorCode::kConfig);

  const json sweep = {{"scenario", "DecoherenceSweep"},
                      {"seed", 1},
                      {"params",
                       {{"a", 0.6}, {"b", 0.8}, {"n_values", {2, 15}},
                        {"trials", 10}, {"t", 1.0}}}};
  EXPECT_EQ(parse_error(sweep), ErrorCode::kCapExceeded);

  const json scan = {{"scenario", "WindowScan"},
                     {"seed", 0},
                     {"params",
                      {{"a2", 0.5}, {"z_values", {1e-3, 1e-2}},
                       {"delta_theta", {1e-4}}}}};
  EXPECT_EQ(parse_error(scan), ErrorCode::kConfig);
}

TEST(ParseConfig, CommittedConfigsLoad) {
  for (const char* name :
       {"compare_postulates.json", "decoherence_sweep.json", "window_scan.json",
        "histories_108.json", "histories_decohered.json", "lambda_map.json"})
    EXPECT_NO_THROW(load_config(kConfigDir / name)) << name;
  try {
    load_config(kConfigDir / "missing.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

TEST(ParseConfig, HistoriesMatrixEncodings) {
  const json nested = {{"scenario", "HistoriesCheck"},
                       {"seed", 0},
                       {"params",
                        {{"dim", 2},
                         {"initial_state", {{1, 0}, {0, 0}}},
                         {"hamiltonian", {{{0, 0}, {0, 1}}, {{0, -1}, {0, 0}}}},
                         {"slots",
                          {{{"time", 0.0},
                            {"observable", {1, 0, 0, -1}},
                            {"partition", {{0}, {1}}}}}}}}};
  const ScenarioConfig cfg = parse_config(nested);
  const auto& p = std::get<HistoriesCheckParams>(cfg.params);
  EXPECT_EQ(p.hamiltonian(0, 1), Complex(0.0, 1.0));
  EXPECT_EQ(p.hamiltonian(1, 0), Complex(0.0, -1.0));
  EXPECT_EQ(p.slots[0].observable(1, 1), Complex(-1.0, 0.0));
  EXPECT_EQ(p.initial_state(0, 0), Complex(1.0, 0.0));

  json bad = nested;
  bad["params"]["slots"][0]["partition"] = {{0}};
  EXPECT_NE(parse_error(bad), ErrorCode::kContractViolation);
  bad = nested;
  bad["params"]["initial_state"] = {{1, 0}, {0, 1}};
  EXPECT_EQ(parse_error(bad), ErrorCode::kConfig);
}

TEST(FitLine, ExactAndNoisy) {
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> y{1.0, 3.0, 5.0, 7.0};
  const LinearFit f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-14);
  const std::vector<double> noisy{1.0, 2.0, 1.0, 2.0};
  EXPECT_LT(fit_line(x, noisy).r_squared, 0.5);
}

TEST(FormatNumber, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 12345.678901234567}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(format_number(0.5), "0.5");
}

TEST(ComparePostulates, DistancesFollowClosedForm) {
  ComparePostulatesParams p;
  p.a2 = 0.5;
  p.z_values = {0.0, 1e-4, 1e-3, 1e-2};
  p.lambdas = {0.0, 0.5, 1.0};
  const ComparePostulatesResult r = run_compare_postulates(p);
  ASSERT_EQ(r.rows.size(), 4u);
  for (const auto& row : r.rows) {
    EXPECT_NEAR(row.d_reduce, std::sqrt(2.0) * row.z, 1e-14);
    EXPECT_NEAR(row.d_unread_standard, std::sqrt(2.0) * row.z, 1e-14);
    for (double d : row.d_unread_lambda) EXPECT_LT(d, 1e-10);
  }
  EXPECT_NEAR(r.d_reduce_fit.slope, std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(r.d_reduce_fit.intercept, 0.0, 1e-12);
}

TEST(DecoherenceSweep, SmallSweep) {
  DecoherenceSweepParams p;
  p.n_values = {0, 2, 4, 6};
  p.trials = 40;
  const DecoherenceSweepResult r = run_decoherence_sweep(p, 17);
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_NEAR(r.rows[0].sweep.median_abs_z, 0.5, 1e-15);
  EXPECT_NEAR(r.rows[0].damping_ratio, 1.0, 1e-14);
  for (std::size_t i = 1; i < r.rows.size(); ++i)
    EXPECT_LT(r.rows[i].sweep.median_abs_z, r.rows[i - 1].sweep.median_abs_z);
  EXPECT_LT(r.log_fit.slope, 0.0);
  EXPECT_LE(r.max_oracle_mismatch, 1e-10);
}

TEST(WindowScan, WidthsTrackClosedForm) {
  WindowScanParams p;
  p.a2 = 0.5;
  p.z_values = {1e-3, 3e-3, 1e-2};
  for (double z : p.z_values) p.delta_theta.push_back(z / 20.0);
  const WindowScanResult r = run_window_scan(p);
  ASSERT_EQ(r.windows.size(), 3u);
  EXPECT_DOUBLE_EQ(r.analytic_slope, 4.0);
  EXPECT_NEAR(r.fitted_slope, 4.0, 0.4);
  for (const auto& w : r.windows) {
    EXPECT_TRUE(w.resolved);
    EXPECT_FALSE(w.truncated);
    EXPECT_NEAR(w.expected_width, testing::window_width_oracle(0.5, w.z), 1e-12);
    EXPECT_NEAR(w.expected_center, testing::window_center_oracle(0.5, w.z), 1e-12);
    EXPECT_NEAR(w.width, w.expected_width, 3.0 * w.delta_theta);
    EXPECT_NEAR(w.center, w.expected_center, 2.0 * w.delta_theta);
    for (const auto& pt : w.points) {
      if (pt.cls == EventClass::kOutOfRange) {
        EXPECT_GT(pt.p, 1.0);
      }
      EXPECT_GE(pt.p, -1e-9);
    }
  }
}

TEST(WindowScan, ScanStateIsQuasiPositiveAlongX) {
  const DensityMatrix rho = window_scan_state(0.5, 0.01);
  const auto r = bloch_vector(rho);
  EXPECT_NEAR(r[0], 1.0, 1e-12);
  EXPECT_NEAR(r[1], 0.0, 1e-12);
  EXPECT_NEAR(r[2], -0.02, 1e-12);
  EXPECT_LT(rho.min_eigenvalue(), 0.0);
}

TEST(HistoriesCheck, CommittedFamilies) {
  const auto witness = std::get<HistoriesCheckParams>(
      load_config(kConfigDir / "histories_108.json").params);
  const HistoriesCheckResult r = run_histories_check(witness);
  EXPECT_FALSE(r.report.consistent);
  const auto it = r.report.probability_table.find({0, 0});
  ASSERT_NE(it, r.report.probability_table.end());
  EXPECT_NEAR(it->second, testing::two_event_chain(108.0 * std::numbers::pi / 180.0).modified,
              1e-12);
  EXPECT_LT(r.additivity_residual, 1e-10);
  ASSERT_TRUE(r.marginalization_residual.has_value());
  EXPECT_LT(*r.marginalization_residual, 1e-10);

  const auto decohered = std::get<HistoriesCheckParams>(
      load_config(kConfigDir / "histories_decohered.json").params);
  EXPECT_TRUE(run_histories_check(decohered).report.consistent);
}

TEST(HistoriesCheck, SingleSlotIsConsistent) {
  HistoriesCheckParams p;
  p.dim = 2;
  p.initial_state = ComplexMatrix{{0.7, Complex{0.1, 0.2}}, {Complex{0.1, -0.2}, 0.3}};
  p.hamiltonian = pauli_x();
  p.slots = {{0.5, pauli_z(), {{0}, {1}}}};
  const HistoriesCheckResult r = run_histories_check(p);
  EXPECT_TRUE(r.report.consistent);
  EXPECT_FALSE(r.marginalization_residual.has_value());
}

TEST(LambdaPositivityMap, MatchesDeterminantFormula) {
  LambdaPositivityMapParams p;
  p.lambda_grid = {0.0, 0.5, 1.0, 2.0};
  p.ratio_grid = {0.0, 0.05, 0.1, 0.3};
  const LambdaPositivityMapResult r = run_lambda_positivity_map(p);
  ASSERT_EQ(r.points.size(), 16u);
  for (const auto& pt : r.points) {
    // Post-state [[1 - l r, r/2], [r/2, l r]].
    const double lr = pt.lambda * pt.ratio;
    const double expected =
        0.5 * (1.0 - std::hypot(1.0 - 2.0 * lr, pt.ratio));
    EXPECT_NEAR(pt.min_eigenvalue, expected, 1e-13);
    EXPECT_EQ(pt.positive, expected >= -1e-12);
    if (pt.lambda >= 1.0 && pt.ratio <= 0.1) {
      EXPECT_TRUE(pt.positive);
    }
  }
}

TEST(RunScenario, CsvFormatAndSummary) {
  const ScenarioOutput out = run_scenario(parse_config(compare_doc()));
  EXPECT_EQ(out.csv.find('\r'), std::string::npos);
  ASSERT_FALSE(out.csv.empty());
  EXPECT_EQ(out.csv.back(), '\n');
  const auto rows = lines(out.csv);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "z,d_reduce,d_unread_standard,d_unread_lambda_0,d_unread_lambda_1");
  EXPECT_EQ(rows[2].substr(0, rows[2].find(',')), format_number(1e-3));
  EXPECT_EQ(out.summary.at("scenario"), "ComparePostulates");
  EXPECT_EQ(out.summary.at("seed"), 3);
  EXPECT_TRUE(out.summary.at("violations").empty());
  EXPECT_TRUE(out.contract_failures.empty());
}

TEST(RunScenario, DeterministicOutputs) {
  const json doc = {{"scenario", "DecoherenceSweep"},
                    {"seed", 99},
                    {"params",
                     {{"a", 0.6}, {"b", {0.0, 0.8}}, {"n_values", {0, 3, 6}},
                      {"trials", 30}, {"t", 1.3}}}};
  const ScenarioConfig cfg = parse_config(doc);
  const ScenarioOutput a = run_scenario(cfg);
  const ScenarioOutput b = run_scenario(cfg);
  EXPECT_EQ(a.csv, b.csv);
  EXPECT_EQ(a.summary.dump(), b.summary.dump());
  ScenarioConfig other = cfg;
  other.seed = 100;
  EXPECT_NE(run_scenario(other).csv, a.csv);
}

TEST(WriteOutputs, ResolvesRelativePaths) {
  const auto dir = std::filesystem::temp_directory_path() / "qreduce_write_test";
  std::filesystem::remove_all(dir);
  json doc = compare_doc();
  doc["outputs"] = {{"csv", "nested/out.csv"}, {"json", "out.json"}};
  const ScenarioConfig cfg = parse_config(doc);
  const ScenarioOutput out = run_scenario(cfg);
  write_outputs(cfg, out, dir);
  std::ifstream csv(dir / "nested" / "out.csv", std::ios::binary);
  std::stringstream text;
  text << csv.rdbuf();
  EXPECT_EQ(text.str(), out.csv);
  std::ifstream js(dir / "out.json");
  EXPECT_EQ(json::parse(js), out.summary);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace qreduce
