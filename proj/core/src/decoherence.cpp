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
#include "qreduce/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "qreduce/error.hpp"

namespace qreduce {

namespace {

constexpr double kNormTolerance = 1e-12;

// Uniform double in [0, 1) from the top 53 bits; portable across standard
// libraries, unlike std::uniform_real_distribution.
double canonical(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void validate(const BitByBitModel& model) {
  if (std::abs(std::norm(model.a) + std::norm(model.b) - 1.0) > kNormTolerance)
    throw Error(ErrorCode::kInvalidArgument,
                "system amplitudes must satisfy |a|^2 + |b|^2 = 1");
  if (model.env_init.size() != model.couplings.size())
    throw Error(ErrorCode::kInvalidArgument,
                "one environment state per coupling is required");
  if (model.n_env() > kMaxEnvQubits) {
    std::ostringstream os;
    os << "environment size " << model.n_env() << " exceeds cap "
       << kMaxEnvQubits;
    throw Error(ErrorCode::kCapExceeded, os.str());
  }
  for (const auto& q : model.env_init)
    if (std::abs(std::norm(q.alpha) + std::norm(q.beta) - 1.0) >
        kNormTolerance)
      throw Error(ErrorCode::kInvalidArgument,
                  "environment qubit state is not normalized");
  for (double g : model.couplings)
    if (!std::isfinite(g))
      throw Error(ErrorCode::kInvalidArgument, "coupling must be finite");
}

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) noexcept {
  return splitmix64(base ^ splitmix64(trial));
}

BitByBitModel random_model(Complex a, Complex b, std::size_t n_env,
                           std::uint64_t seed) {
  if (n_env > kMaxEnvQubits)
    throw Error(ErrorCode::kCapExceeded, "environment size exceeds cap");
  BitByBitModel model{a, b, {}, {}, seed};
  std::mt19937_64 rng(seed);
  model.couplings.reserve(n_env);
  model.env_init.reserve(n_env);
  for (std::size_t k = 0; k < n_env; ++k) {
    const double g = canonical(rng);
    const double cos_theta = 2.0 * canonical(rng) - 1.0;
    const double phi = 2.0 * std::numbers::pi * canonical(rng);
    model.couplings.push_back(g);
    model.env_init.push_back(
        {Complex{std::sqrt(0.5 * (1.0 + cos_theta)), 0.0},
         std::polar(std::sqrt(std::max(0.0, 0.5 * (1.0 - cos_theta))), phi)});
  }
  validate(model);
  return model;
}

std::vector<Complex> build_joint_state(const BitByBitModel& model) {
  validate(model);
  std::vector<Complex> state{model.a, model.b};
  for (const auto& q : model.env_init) {
    std::vector<Complex> next(state.size() * 2);
    for (std::size_t i = 0; i < state.size(); ++i) {
      next[2 * i] = state[i] * q.alpha;
      next[2 * i + 1] = state[i] * q.beta;
    }
    state = std::move(next);
  }
  return state;
}

DensityMatrix evolve_and_trace(const BitByBitModel& model, double t) {
  std::vector<Complex> psi = build_joint_state(model);
  const std::size_t n = model.n_env();
  const std::size_t env_dim = std::size_t{1} << n;

  // H is diagonal: E(s, e) = s * sum_k g_k e_k with s, e_k = +1 for |up>.
  for (std::size_t idx = 0; idx < psi.size(); ++idx) {
    const double s = (idx >> n) & 1 ? -1.0 : 1.0;
    double field = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const bool down = (idx >> (n - 1 - k)) & 1;
      field += down ? -model.couplings[k] : model.couplings[k];
    }
    psi[idx] *= std::polar(1.0, -s * field * t);
  }

  ComplexMatrix reduced(2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      Complex sum = 0.0;
      for (std::size_t e = 0; e < env_dim; ++e)
        sum += psi[i * env_dim + e] * std::conj(psi[j * env_dim + e]);
      reduced(i, j) = sum;
    }
  return make_density(reduced);
}

Complex interference_amplitude(const BitByBitModel& model, double t) {
  Complex z = model.a * std::conj(model.b);
  for (std::size_t k = 0; k < model.n_env(); ++k) {
    const double angle = 2.0 * model.couplings[k] * t;
    const double bias =
        std::norm(model.env_init[k].alpha) - std::norm(model.env_init[k].beta);
    z *= Complex{std::cos(angle), -bias * std::sin(angle)};
  }
  return z;
}

DensityMatrix decohered_qubit(double a2, Complex z, double quasi_threshold) {
  return make_density({{a2, z}, {std::conj(z), 1.0 - a2}}, quasi_threshold);
}

double damping_ratio(const DensityMatrix& rho) {
  const ComplexMatrix& m = rho.matrix();
  double ratio = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    if (!(m(i, i).real() > 0.0))
      return std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (i == j) continue;
      const double floor = std::min(m(i, i).real(), m(j, j).real());
      if (!(floor > 0.0)) return std::numeric_limits<double>::infinity();
      ratio = std::max(ratio, std::abs(m(i, j)) / floor);
    }
  }
  return ratio;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty())
    throw Error(ErrorCode::kInvalidArgument, "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<SweepRow> suppression_sweep(const BitByBitModel& base,
                                        std::span<const std::size_t> n_values,
                                        double t, std::size_t trials) {
  if (trials == 0)
    throw Error(ErrorCode::kInvalidArgument, "sweep needs at least one trial");
  for (std::size_t n : n_values)
    if (n > kMaxEnvQubits)
      throw Error(ErrorCode::kCapExceeded, "environment size exceeds cap");

  std::vector<SweepRow> rows;
  rows.reserve(n_values.size());
  for (std::size_t n : n_values) {
    SweepRow row{n, 0.0, 0.0, 0.0, 0.0, {}};
    row.abs_z.reserve(trials);
    for (std::size_t trial = 0; trial < trials; ++trial) {
      const BitByBitModel model =
          random_model(base.a, base.b, n, trial_seed(base.seed, trial));
      const Complex z = interference_amplitude(model, t);
      const Complex exact = evolve_and_trace(model, t).matrix()(0, 1);
      row.max_oracle_mismatch =
          std::max(row.max_oracle_mismatch, std::abs(z - exact));
      row.abs_z.push_back(std::abs(z));
    }
    row.median_abs_z = quantile(row.abs_z, 0.5);
    row.q25 = quantile(row.abs_z, 0.25);
    row.q75 = quantile(row.abs_z, 0.75);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qreduce
