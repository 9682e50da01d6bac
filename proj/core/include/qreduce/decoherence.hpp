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
#include <span>
#include <vector>

#include "qreduce/state.hpp"

namespace qreduce {

inline constexpr std::size_t kMaxEnvQubits = 14;

struct EnvQubit {
  Complex alpha;  // amplitude of |up>
  Complex beta;   // amplitude of |down>
};

// A system qubit a|up> + b|down> coupled to N environment qubits through
// H = sigma_z (x) sum_k g_k sigma_z^(k). Basis ordering: system qubit most
// significant, then environment qubit 0, 1, ...; |up> is index 0.
struct BitByBitModel {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};
  std::vector<double> couplings;
  std::vector<EnvQubit> env_init;
  std::uint64_t seed = 0;

  std::size_t n_env() const noexcept { return couplings.size(); }
};

// Throws kInvalidArgument on unnormalized amplitudes or mismatched sizes and
// kCapExceeded when N > kMaxEnvQubits.
void validate(const BitByBitModel& model);

// Couplings uniform on [0, 1), environment states uniform on the Bloch
// sphere. Qubits are drawn in order from one stream, so the model with N+1
// qubits extends the one with N for the same seed.
BitByBitModel random_model(Complex a, Complex b, std::size_t n_env,
                           std::uint64_t seed);

// Seed of Monte-Carlo trial `trial` derived from a base seed.
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) noexcept;

// (a|up> + b|down>) (x) prod_k (alpha_k|up> + beta_k|down>).
std::vector<Complex> build_joint_state(const BitByBitModel& model);

// Exact evolution for time t followed by the partial trace over the
// environment.
DensityMatrix evolve_and_trace(const BitByBitModel& model, double t);

// Closed form of the (up, down) element of evolve_and_trace:
//   z(t) = a conj(b) prod_k [cos(2 g_k t) - i (|alpha_k|^2 - |beta_k|^2) sin(2 g_k t)].
Complex interference_amplitude(const BitByBitModel& model, double t);

// [[a2, z], [conj(z), 1 - a2]]
DensityMatrix decohered_qubit(double a2, Complex z,
                              double quasi_threshold = kDefaultQuasiThreshold);

// max_{i != j} |rho_ij| / min(rho_ii, rho_jj); +infinity when a diagonal
// entry is not positive.
double damping_ratio(const DensityMatrix& rho);

struct SweepRow {
  std::size_t n_env;
  double median_abs_z;
  double q25;
  double q75;
  // max over trials of |closed form - exact partial trace|
  double max_oracle_mismatch;
  std::vector<double> abs_z;  // per trial, in trial order
};

// For each N draws `trials` random models (trial i uses trial_seed(base.seed,
// i) for every N, so models are nested across N) and records |z(t)|.
std::vector<SweepRow> suppression_sweep(const BitByBitModel& base,
                                        std::span<const std::size_t> n_values,
                                        double t, std::size_t trials);

// Quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

}  // namespace qreduce
