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
#include "qreduce/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "qreduce/error.hpp"

namespace qreduce {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::kConfig, what);
}

const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key))
    config_error(std::string("missing required key '") + key + "'");
  return obj.at(key);
}

double as_number(const json& v, const std::string& what) {
  if (!v.is_number()) config_error(what + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) config_error(what + " must be finite");
  return d;
}

std::vector<double> as_numbers(const json& v, const std::string& what) {
  if (!v.is_array() || v.empty())
    config_error(what + " must be a non-empty array of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(as_number(e, what));
  return out;
}

std::size_t as_count(const json& v, const std::string& what) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    config_error(what + " must be a non-negative integer");
  return v.get<std::size_t>();
}

// A number (real) or a pair [re, im].
Complex as_complex(const json& v, const std::string& what) {
  if (v.is_number()) return {as_number(v, what), 0.0};
  if (v.is_array() && v.size() == 2)
    return {as_number(v[0], what), as_number(v[1], what)};
  config_error(what + " must be a number or a [re, im] pair");
}

// Row-major: either dim rows of dim entries or a flat list of dim*dim entries.
ComplexMatrix as_matrix(const json& v, std::size_t dim,
                        const std::string& what) {
  if (!v.is_array()) config_error(what + " must be an array");
  std::vector<Complex> entries;
  const bool nested =
      v.size() == dim && v[0].is_array() && v[0].size() == dim;
  if (nested) {
    for (const auto& row : v) {
      if (!row.is_array() || row.size() != dim)
        config_error(what + " rows must each have dim entries");
      for (const auto& e : row) entries.push_back(as_complex(e, what));
    }
  } else {
    if (v.size() != dim * dim)
      config_error(what + " must have dim*dim entries");
    for (const auto& e : v) entries.push_back(as_complex(e, what));
  }
  return ComplexMatrix(dim, std::move(entries));
}

std::vector<IndexSet> as_partition(const json& v, const std::string& what) {
  if (!v.is_array() || v.empty())
    config_error(what + " must be a non-empty list of index sets");
  std::vector<IndexSet> out;
  for (const auto& set : v) {
    if (!set.is_array()) config_error(what + " entries must be arrays");
    IndexSet s;
    for (const auto& i : set) s.push_back(as_count(i, what));
    out.push_back(std::move(s));
  }
  return out;
}

ComparePostulatesParams parse_compare(const json& p) {
  ComparePostulatesParams out;
  out.a2 = as_number(require(p, "a2"), "a2");
  if (!(out.a2 > 0.0 && out.a2 < 1.0)) config_error("a2 must lie in (0, 1)");
  out.z_values = as_numbers(require(p, "z_values"), "z_values");
  out.lambdas = as_numbers(require(p, "lambdas"), "lambdas");
  for (double z : out.z_values)
    if (std::abs(z) >= 1.0) config_error("|z| must be below 1");
  return out;
}

DecoherenceSweepParams parse_sweep(const json& p) {
  DecoherenceSweepParams out;
  out.a = as_complex(require(p, "a"), "a");
  out.b = as_complex(require(p, "b"), "b");
  if (std::abs(std::norm(out.a) + std::norm(out.b) - 1.0) > 1e-12)
    config_error("a and b must satisfy |a|^2 + |b|^2 = 1");
  const json& ns = require(p, "n_values");
  if (!ns.is_array() || ns.empty())
    config_error("n_values must be a non-empty array");
  for (const auto& n : ns) {
    const std::size_t v = as_count(n, "n_values");
    if (v > kMaxEnvQubits)
      throw Error(ErrorCode::kCapExceeded,
                  "n_values entry exceeds the environment cap of 14");
    out.n_values.push_back(v);
  }
  out.trials = as_count(require(p, "trials"), "trials");
  if (out.trials == 0) config_error("trials must be positive");
  out.t = as_number(require(p, "t"), "t");
  return out;
}

WindowScanParams parse_window(const json& p) {
  WindowScanParams out;
  out.a2 = as_number(require(p, "a2"), "a2");
  if (!(out.a2 > 0.0 && out.a2 <= 1.0)) config_error("a2 must lie in (0, 1]");
  out.z_values = as_numbers(require(p, "z_values"), "z_values");
  const json& dt = require(p, "delta_theta");
  if (dt.is_number()) {
    out.delta_theta.assign(out.z_values.size(),
                           as_number(dt, "delta_theta"));
  } else {
    out.delta_theta = as_numbers(dt, "delta_theta");
    if (out.delta_theta.size() != out.z_values.size())
      config_error("delta_theta array must match z_values in length");
  }
  for (double d : out.delta_theta)
    if (!(d > 0.0)) config_error("delta_theta must be positive");
  if (p.contains("tol")) out.tol = as_number(p.at("tol"), "tol");
  if (p.contains("half_width")) {
    out.half_width = as_number(p.at("half_width"), "half_width");
    if (!(*out.half_width > 0.0)) config_error("half_width must be positive");
  }
  for (std::size_t i = 0; i < out.z_values.size(); ++i) {
    const double hw = out.half_width.value_or(
        std::max(6.0 * std::abs(out.z_values[i]) / out.a2,
                 50.0 * out.delta_theta[i]));
    if (hw / out.delta_theta[i] > 5e6)
      throw Error(ErrorCode::kCapExceeded,
                  "window scan would need more than 1e7 points");
  }
  return out;
}

HistoriesCheckParams parse_histories(const json& p) {
  HistoriesCheckParams out;
  out.dim = as_count(require(p, "dim"), "dim");
  if (out.dim == 0) config_error("dim must be positive");
  out.initial_state =
      as_matrix(require(p, "initial_state"), out.dim, "initial_state");
  out.hamiltonian = as_matrix(require(p, "hamiltonian"), out.dim, "hamiltonian");
  const json& slots = require(p, "slots");
  if (!slots.is_array() || slots.empty())
    config_error("slots must be a non-empty array");
  for (const auto& s : slots) {
    SlotSpec spec;
    spec.time = as_number(require(s, "time"), "slot time");
    spec.observable = as_matrix(require(s, "observable"), out.dim, "observable");
    spec.partition = as_partition(require(s, "partition"), "partition");
    out.slots.push_back(std::move(spec));
  }
  if (p.contains("tol")) out.tol = as_number(p.at("tol"), "tol");
  if (p.contains("quasi_threshold"))
    out.quasi_threshold = as_number(p.at("quasi_threshold"), "quasi_threshold");
  return out;
}

LambdaPositivityMapParams parse_lambda_map(const json& p) {
  LambdaPositivityMapParams out;
  out.lambda_grid = as_numbers(require(p, "lambda_grid"), "lambda_grid");
  out.ratio_grid = as_numbers(require(p, "ratio_grid"), "ratio_grid");
  for (double r : out.ratio_grid)
    if (r < 0.0) config_error("ratio_grid entries must be non-negative");
  return out;
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

json fit_json(const LinearFit& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"r_squared", f.r_squared}};
}

ScenarioOutput render(const ComparePostulatesParams& params,
                      const ComparePostulatesResult& r) {
  ScenarioOutput out;
  std::vector<std::string> header{"z", "d_reduce", "d_unread_standard"};
  for (double l : params.lambdas)
    header.push_back("d_unread_lambda_" + format_number(l));
  out.csv = csv_line(header);
  double worst_lambda = 0.0;
  double worst_standard = 0.0;
  for (const auto& row : r.rows) {
    std::vector<std::string> cells{format_number(row.z),
                                   format_number(row.d_reduce),
                                   format_number(row.d_unread_standard)};
    for (double d : row.d_unread_lambda) {
      cells.push_back(format_number(d));
      worst_lambda = std::max(worst_lambda, d);
    }
    worst_standard = std::max(
        worst_standard,
        std::abs(row.d_unread_standard - std::numbers::sqrt2 * std::abs(row.z)));
    out.csv += csv_line(cells);
  }
  out.summary["results"] = {{"rows", r.rows.size()},
                            {"d_reduce_fit", fit_json(r.d_reduce_fit)},
                            {"max_d_unread_lambda", worst_lambda},
                            {"max_unread_standard_error", worst_standard}};
  if (worst_lambda >= 1e-10)
    out.contract_failures.push_back(
        "lambda-family unread mixture differs from rho by " +
        format_number(worst_lambda));
  if (worst_standard >= 1e-10)
    out.contract_failures.push_back(
        "standard unread mixture distance deviates from sqrt(2)|z| by " +
        format_number(worst_standard));
  return out;
}

ScenarioOutput render(const DecoherenceSweepResult& r) {
  ScenarioOutput out;
  out.csv = csv_line({"N", "median_abs_z", "q25", "q75", "damping_ratio"});
  json rows = json::array();
  for (const auto& row : r.rows) {
    out.csv += csv_line({std::to_string(row.sweep.n_env),
                         format_number(row.sweep.median_abs_z),
                         format_number(row.sweep.q25),
                         format_number(row.sweep.q75),
                         format_number(row.damping_ratio)});
    rows.push_back({{"N", row.sweep.n_env},
                    {"median_abs_z", row.sweep.median_abs_z},
                    {"damping_ratio", row.damping_ratio}});
  }
  out.summary["results"] = {{"rows", rows},
                            {"log_median_fit", fit_json(r.log_fit)},
                            {"fitted_base", std::exp(r.log_fit.slope)},
                            {"max_oracle_mismatch", r.max_oracle_mismatch}};
  if (!(r.max_oracle_mismatch <= 1e-10))
    out.contract_failures.push_back(
        "closed-form z(t) differs from the exact partial trace by " +
        format_number(r.max_oracle_mismatch));
  return out;
}

ScenarioOutput render(const WindowScanResult& r) {
  ScenarioOutput out;
  out.csv = csv_line({"z", "theta", "p", "classification"});
  json windows = json::array();
  for (const auto& w : r.windows) {
    for (const auto& pt : w.points)
      out.csv += csv_line({format_number(w.z), format_number(pt.theta),
                           format_number(pt.p), to_string(pt.cls)});
    windows.push_back({{"z", w.z},
                       {"window_width", w.width},
                       {"window_center", w.center},
                       {"expected_width", w.expected_width},
                       {"expected_center", w.expected_center},
                       {"delta_theta", w.delta_theta},
                       {"resolved", w.resolved},
                       {"truncated", w.truncated}});
  }
  out.summary["results"] = {{"windows", windows},
                            {"fitted_slope", r.fitted_slope},
                            {"analytic_slope", r.analytic_slope},
                            {"angle_convention",
                             "theta measured from +z toward +x, radians"}};
  return out;
}

ScenarioOutput render(const HistoriesCheckParams& params,
                      const HistoriesCheckResult& r) {
  ScenarioOutput out;
  const HistoryFamily family = build_history_family(params);
  std::vector<std::string> header;
  for (std::size_t s = 0; s < family.num_slots(); ++s)
    header.push_back("slot" + std::to_string(s));
  header.push_back("p_modified");
  header.push_back("p_standard");
  out.csv = csv_line(header);
  json table = json::array();
  for (const auto& [choice, p] : r.report.probability_table) {
    const double standard =
        history_probability_standard(History(family, choice));
    std::vector<std::string> cells;
    for (std::size_t c : choice) cells.push_back(std::to_string(c));
    cells.push_back(format_number(p));
    cells.push_back(format_number(standard));
    out.csv += csv_line(cells);
    table.push_back({{"history", choice}, {"p", p}, {"p_standard", standard}});
  }
  json violations = json::array();
  for (const auto& v : r.report.violations)
    violations.push_back(
        {{"coarse_graining", v.coarse_graining}, {"probability", v.probability}});
  out.summary["violations"] = violations;
  out.summary["results"] = {
      {"consistent", r.report.consistent},
      {"branches_checked", r.report.branches_checked},
      {"probability_table", table},
      {"additivity_residual", r.additivity_residual},
      {"marginalization_residual",
       r.marginalization_residual ? json(*r.marginalization_residual)
                                  : json(nullptr)}};
  if (!(r.additivity_residual < 1e-10))
    out.contract_failures.push_back("additivity residual " +
                                    format_number(r.additivity_residual));
  if (r.marginalization_residual && !(*r.marginalization_residual < 1e-10))
    out.contract_failures.push_back(
        "marginalization residual " + format_number(*r.marginalization_residual));
  return out;
}

ScenarioOutput render(const LambdaPositivityMapResult& r) {
  ScenarioOutput out;
  out.csv = csv_line({"lambda", "ratio", "min_eig", "positive"});
  bool decohered_positive = true;
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& pt : r.points) {
    out.csv += csv_line({format_number(pt.lambda), format_number(pt.ratio),
                         format_number(pt.min_eigenvalue),
                         pt.positive ? "true" : "false"});
    if (pt.lambda >= 1.0 && pt.ratio <= 0.1 && !pt.positive)
      decohered_positive = false;
    lowest = std::min(lowest, pt.min_eigenvalue);
  }
  out.summary["results"] = {
      {"points", r.points.size()},
      {"lowest_min_eig", lowest},
      {"positive_for_lambda_ge_1_ratio_le_0_1", decohered_positive}};
  return out;
}

}  // namespace

const std::vector<std::string_view>& scenario_names() {
  static const std::vector<std::string_view> names{
      "ComparePostulates", "DecoherenceSweep", "WindowScan", "HistoriesCheck",
      "LambdaPositivityMap"};
  return names;
}

std::string_view to_string(Scenario s) noexcept {
  return scenario_names()[static_cast<std::size_t>(s)];
}

Scenario parse_scenario(std::string_view name) {
  const auto& names = scenario_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<Scenario>(i);
  config_error("unknown scenario '" + std::string(name) + "'");
}

HistoryFamily build_history_family(const HistoriesCheckParams& params) {
  DensityMatrix rho = make_density(params.initial_state, params.quasi_threshold);
  std::vector<double> times;
  std::vector<ProjectorFamily> slots;
  for (const auto& s : params.slots) {
    times.push_back(s.time);
    slots.push_back(
        spectral_projectors(make_observable(s.observable), s.partition));
  }
  return make_history_family(std::move(rho), params.hamiltonian,
                             std::move(times), std::move(slots));
}

ScenarioConfig parse_config(const json& doc) {
  if (!doc.is_object()) config_error("config must be a JSON object");
  ScenarioConfig cfg;
  const json& tag = require(doc, "scenario");
  if (!tag.is_string()) config_error("scenario must be a string");
  cfg.scenario = parse_scenario(tag.get<std::string>());
  const json& seed = require(doc, "seed");
  if (!seed.is_number_integer() ||
      (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0))
    config_error("seed must be a non-negative integer");
  cfg.seed = seed.get<std::uint64_t>();
  const json& params = require(doc, "params");
  if (!params.is_object()) config_error("params must be an object");

  try {
    switch (cfg.scenario) {
      case Scenario::kComparePostulates:
        cfg.params = parse_compare(params);
        break;
      case Scenario::kDecoherenceSweep:
        cfg.params = parse_sweep(params);
        break;
      case Scenario::kWindowScan:
        cfg.params = parse_window(params);
        break;
      case Scenario::kHistoriesCheck: {
        HistoriesCheckParams h = parse_histories(params);
        const HistoryFamily family = build_history_family(h);
        double product = 1.0;
        for (const auto& f : family.slots())
          product *= std::ldexp(1.0, static_cast<int>(f.size()));
        if (product > kMaxCoarseGrainingProduct)
          throw Error(ErrorCode::kCapExceeded,
                      "coarse-graining enumeration exceeds the cap");
        cfg.params = std::move(h);
        break;
      }
      case Scenario::kLambdaPositivityMap:
        cfg.params = parse_lambda_map(params);
        break;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfig || e.code() == ErrorCode::kCapExceeded)
      throw;
    config_error(std::string("invalid params: ") + e.what());
  } catch (const json::exception& e) {
    config_error(std::string("invalid params: ") + e.what());
  }

  const std::string stem(to_string(cfg.scenario));
  cfg.csv_path = stem + ".csv";
  cfg.json_path = stem + ".json";
  if (doc.contains("outputs")) {
    const json& outputs = doc.at("outputs");
    if (!outputs.is_object()) config_error("outputs must be an object");
    if (outputs.contains("csv")) {
      if (!outputs.at("csv").is_string()) config_error("outputs.csv must be a string");
      cfg.csv_path = outputs.at("csv").get<std::string>();
    }
    if (outputs.contains("json")) {
      if (!outputs.at("json").is_string()) config_error("outputs.json must be a string");
      cfg.json_path = outputs.at("json").get<std::string>();
    }
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorCode::kInvalidArgument,
                "linear fit needs two or more paired samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0)
    throw Error(ErrorCode::kInvalidArgument, "linear fit needs distinct x");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += e * e;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

ComparePostulatesResult run_compare_postulates(
    const ComparePostulatesParams& p) {
  const ProjectorFamily pointer = pointer_family(2);
  ComparePostulatesResult out;
  std::vector<double> zs, ds;
  for (double z : p.z_values) {
    const DensityMatrix rho = decohered_qubit(p.a2, z);
    CompareRow row{z, postulate_distance(rho, pointer[0]),
                   frobenius_distance(
                       unread_mixture_standard(rho, pointer).matrix(),
                       rho.matrix()),
                   {}};
    for (double lambda : p.lambdas)
      row.d_unread_lambda.push_back(frobenius_distance(
          unread_mixture_lambda(rho, pointer, lambda).matrix(), rho.matrix()));
    zs.push_back(std::abs(z));
    ds.push_back(row.d_reduce);
    out.rows.push_back(std::move(row));
  }
  const bool distinct =
      std::adjacent_find(zs.begin(), zs.end(), std::not_equal_to<>()) !=
      zs.end();
  if (zs.size() >= 2 && distinct) out.d_reduce_fit = fit_line(zs, ds);
  return out;
}

DecoherenceSweepResult run_decoherence_sweep(const DecoherenceSweepParams& p,
                                             std::uint64_t seed) {
  BitByBitModel base{p.a, p.b, {}, {}, seed};
  validate(base);
  const std::vector<SweepRow> sweep =
      suppression_sweep(base, p.n_values, p.t, p.trials);
  DecoherenceSweepResult out;
  std::vector<double> xs, ys;
  const double a2 = std::norm(p.a);
  for (const auto& row : sweep) {
    const double ratio = damping_ratio(decohered_qubit(a2, row.median_abs_z));
    out.max_oracle_mismatch =
        std::max(out.max_oracle_mismatch, row.max_oracle_mismatch);
    if (row.median_abs_z > 0.0) {
      xs.push_back(static_cast<double>(row.n_env));
      ys.push_back(std::log(row.median_abs_z));
    }
    out.rows.push_back({row, ratio});
  }
  const bool distinct =
      std::adjacent_find(xs.begin(), xs.end(), std::not_equal_to<>()) !=
      xs.end();
  if (xs.size() >= 2 && distinct) out.log_fit = fit_line(xs, ys);
  return out;
}

DensityMatrix window_scan_state(double a2, Complex z) {
  const DensityMatrix rho = decohered_qubit(a2, z);
  const Projector up = pointer_family(2)[0];
  const ReductionOutcome reduced = reduce_modified(rho, up);
  const ComplexMatrix half_turn =
      unitary_exp(pauli_y() * 0.5, std::numbers::pi / 2.0);
  return evolve(reduced.post_state, half_turn);
}

WindowScanResult run_window_scan(const WindowScanParams& p) {
  WindowScanResult out;
  out.analytic_slope = 2.0 / p.a2;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < p.z_values.size(); ++i) {
    const double z = p.z_values[i];
    const double step = p.delta_theta[i];
    const DensityMatrix state = window_scan_state(p.a2, z);
    const auto r = bloch_vector(state);

    WindowMeasurement w;
    w.z = z;
    w.delta_theta = step;
    w.expected_center = std::atan2(r[0], r[2]);
    const double transverse = std::hypot(r[0], r[2]);
    w.expected_width = transverse > 1.0 ? 2.0 * std::acos(1.0 / transverse) : 0.0;

    const double half_width = p.half_width.value_or(
        std::max(6.0 * std::abs(z) / p.a2, 50.0 * step));
    const auto k_max = static_cast<long long>(std::ceil(half_width / step));
    w.points.reserve(static_cast<std::size_t>(2 * k_max + 1));
    for (long long k = -k_max; k <= k_max; ++k) {
      const double theta = std::numbers::pi / 2.0 + static_cast<double>(k) * step;
      const double prob = event_probability(
          state, bloch_projector({std::sin(theta), 0.0, std::cos(theta)}));
      w.points.push_back({theta, prob, classify_probability(prob, p.tol)});
    }

    // The window is the run of non-branching directions around the maximum
    // of p (the direction closest to the rotated Bloch vector).
    const auto peak = std::max_element(
        w.points.begin(), w.points.end(),
        [](const ScanPoint& l, const ScanPoint& r) { return l.p < r.p; });
    const auto no_event = [](const ScanPoint& pt) {
      return pt.cls == EventClass::kOutOfRange ||
             pt.cls == EventClass::kCertainTrue;
    };
    std::size_t count = 0;
    if (no_event(*peak)) {
      auto lo = peak;
      while (lo != w.points.begin() && no_event(*(lo - 1))) --lo;
      auto hi = peak;
      while (hi + 1 != w.points.end() && no_event(*(hi + 1))) ++hi;
      count = static_cast<std::size_t>(hi - lo) + 1;
      w.center = 0.5 * (lo->theta + hi->theta);
      w.truncated = lo == w.points.begin() || hi + 1 == w.points.end();
    } else {
      w.center = peak->theta;
    }
    w.width = static_cast<double>(count) * step;
    w.resolved = count >= 10;
    if (z != 0.0) {
      num += std::abs(z) * w.width;
      den += z * z;
    }
    out.windows.push_back(std::move(w));
  }
  out.fitted_slope = den > 0.0 ? num / den : 0.0;
  return out;
}

HistoriesCheckResult run_histories_check(const HistoriesCheckParams& p) {
  const HistoryFamily family = build_history_family(p);
  HistoriesCheckResult out;
  out.report = check_consistency(family, p.tol);
  for (std::size_t s = 0; s < family.num_slots(); ++s) {
    const std::size_t m = family.slots()[s].size();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        out.additivity_residual = std::max(
            out.additivity_residual, additivity_residual(family, s, {i, j}));
  }
  if (family.num_slots() >= 2)
    out.marginalization_residual = marginalization_residual(family);
  return out;
}

LambdaPositivityMapResult run_lambda_positivity_map(
    const LambdaPositivityMapParams& p) {
  const ProjectorFamily pointer = pointer_family(2);
  LambdaPositivityMapResult out;
  for (double lambda : p.lambda_grid)
    for (double ratio : p.ratio_grid) {
      // rho_ii = 1/2, |z| = ratio / 2
      const DensityMatrix rho = decohered_qubit(0.5, 0.5 * ratio);
      const ReductionOutcome red = reduce_lambda(rho, pointer, 0, lambda);
      const double lo = red.post_state.min_eigenvalue();
      out.points.push_back({lambda, ratio, lo, lo >= -kPositivityFloor});
    }
  return out;
}

ScenarioOutput run_scenario(const ScenarioConfig& cfg) {
  ScenarioOutput out = std::visit(
      [&](const auto& params) -> ScenarioOutput {
        using T = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<T, ComparePostulatesParams>)
          return render(params, run_compare_postulates(params));
        else if constexpr (std::is_same_v<T, DecoherenceSweepParams>)
          return render(run_decoherence_sweep(params, cfg.seed));
        else if constexpr (std::is_same_v<T, WindowScanParams>)
          return render(run_window_scan(params));
        else if constexpr (std::is_same_v<T, HistoriesCheckParams>)
          return render(params, run_histories_check(params));
        else
          return render(run_lambda_positivity_map(params));
      },
      cfg.params);
  out.summary["scenario"] = std::string(to_string(cfg.scenario));
  out.summary["seed"] = cfg.seed;
  if (!out.summary.contains("violations")) {
    json violations = json::array();
    for (const auto& f : out.contract_failures)
      violations.push_back({{"contract", f}});
    out.summary["violations"] = violations;
  }
  return out;
}

void write_outputs(const ScenarioConfig& cfg, const ScenarioOutput& out,
                   const std::filesystem::path& out_dir) {
  const auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() ? out_dir / path : path;
  };
  const auto write = [](const std::filesystem::path& path,
                        const std::string& text) {
    if (path.has_parent_path())
      std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::kConfig, "cannot write " + path.string());
    f << text;
  };
  write(resolve(cfg.csv_path), out.csv);
  write(resolve(cfg.json_path), out.summary.dump(2) + "\n");
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace qreduce
