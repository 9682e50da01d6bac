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
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qreduce/state.hpp"

namespace qreduce {

inline constexpr double kDefaultConsistencyTolerance = 1e-9;
// Upper bound on prod_slots 2^(members) accepted by check_consistency.
inline constexpr double kMaxCoarseGrainingProduct = 1e6;

// U^dagger(t) P U(t) with U(t) = exp(-i H t).
Projector heisenberg_projector(const Projector& p, const ComplexMatrix& h,
                               double t);

// Alternative histories over a common time grid. Projectors are stored in the
// Heisenberg picture, which is equivalent to evolving the initial state with
// H between events.
class HistoryFamily {
 public:
  const DensityMatrix& initial_state() const noexcept { return rho_; }
  const ComplexMatrix& hamiltonian() const noexcept { return hamiltonian_; }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<ProjectorFamily>& slots() const noexcept { return slots_; }
  std::size_t num_slots() const noexcept { return slots_.size(); }
  // Heisenberg-picture matrix of member `member` in slot `slot`.
  const ComplexMatrix& evolved(std::size_t slot, std::size_t member) const {
    return evolved_.at(slot).at(member);
  }
  // Number of fine-grained branches, prod_slots |family|.
  std::size_t num_branches() const noexcept;

 private:
  friend HistoryFamily make_history_family(DensityMatrix, ComplexMatrix,
                                           std::vector<double>,
                                           std::vector<ProjectorFamily>);
  HistoryFamily(DensityMatrix rho, ComplexMatrix h, std::vector<double> times,
                std::vector<ProjectorFamily> slots,
                std::vector<std::vector<ComplexMatrix>> evolved)
      : rho_(std::move(rho)),
        hamiltonian_(std::move(h)),
        times_(std::move(times)),
        slots_(std::move(slots)),
        evolved_(std::move(evolved)) {}

  DensityMatrix rho_;
  ComplexMatrix hamiltonian_;
  std::vector<double> times_;
  std::vector<ProjectorFamily> slots_;
  std::vector<std::vector<ComplexMatrix>> evolved_;
};

// Throws kInvalidArgument for an empty or non-increasing grid or a
// times/slots size mismatch, kDimensionMismatch for inconsistent dimensions,
// kNotHermitian for the Hamiltonian.
HistoryFamily make_history_family(DensityMatrix rho, ComplexMatrix hamiltonian,
                                  std::vector<double> times,
                                  std::vector<ProjectorFamily> slots);

// One branch: a member index per slot.
class History {
 public:
  History(const HistoryFamily& family, std::vector<std::size_t> choice);

  const HistoryFamily& family() const noexcept { return *family_; }
  const std::vector<std::size_t>& choice() const noexcept { return choice_; }

 private:
  const HistoryFamily* family_;
  std::vector<std::size_t> choice_;
};

// Tr[Q_n X_{n-1}] with X_0 = rho and X_k = [Q_k, X_{k-1}]_+ / 2: one factor
// 1/2 per anticommutator, so a single event gives Tr[rho Q_1] and the sum
// over a complete final slot reproduces the shorter chain. `ops` are
// Heisenberg-picture operators in time order. Throws kImaginaryResidue.
double chain_probability_modified(const ComplexMatrix& rho,
                                  std::span<const ComplexMatrix> ops);
// Tr[C rho C^dagger] with C = Q_n ... Q_1.
double chain_probability_standard(const ComplexMatrix& rho,
                                  std::span<const ComplexMatrix> ops);

double history_probability_modified(const History& h);
double history_probability_standard(const History& h);

struct Violation {
  // e.g. "t0:{0,2} t1:{1}"; member indices of each slot's union
  std::string coarse_graining;
  double probability;
};

struct ConsistencyReport {
  bool consistent = true;
  std::vector<Violation> violations;
  std::map<std::vector<std::size_t>, double> probability_table;
  std::size_t branches_checked = 0;
};

// Evaluates the modified chain on every branch of every coarse-graining (each
// slot replaced by any nonempty union of its members, slots independently) and
// reports values outside [-tol, 1 + tol]. Throws kCapExceeded when
// prod 2^(m_i) > kMaxCoarseGrainingProduct.
ConsistencyReport check_consistency(
    const HistoryFamily& family, double tol = kDefaultConsistencyTolerance);

// max over fine-grained branches of the other slots of
// |p(P_i + P_j) - p(P_i) - p(P_j)| at slot `slot`.
double additivity_residual(const HistoryFamily& family, std::size_t slot,
                           std::pair<std::size_t, std::size_t> parts);

// max over branches of the family truncated before its last slot of
// |sum_m p(branch, m) - p(branch)|. Needs at least two slots.
double marginalization_residual(const HistoryFamily& family);

}  // namespace qreduce
