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

#include "qreduce/state.hpp"

namespace qreduce {

// Probabilities with magnitude at or below this are treated as zero by the
// reduction operations.
inline constexpr double kMinProbability = 1e-12;
inline constexpr double kDefaultEventTolerance = 1e-9;

enum class PostulateKind { kStandard, kLambda, kModified };

struct Postulate {
  PostulateKind kind = PostulateKind::kStandard;
  double lambda = 0.0;  // only meaningful for kLambda
};

struct ReductionOutcome {
  double probability;
  DensityMatrix post_state;
  Postulate postulate;
};

// Lueders rule: P rho P / Tr[rho P]. Throws kZeroProbability if
// Tr[rho P] <= kMinProbability.
ReductionOutcome reduce_standard(const DensityMatrix& rho, const Projector& p);

// sum_n P_n rho P_n, the unread outcome of a standard measurement.
DensityMatrix unread_mixture_standard(const DensityMatrix& rho,
                                      const ProjectorFamily& family);

// One-parameter family of pointer-basis reductions. With P_i the selected
// member and |rho_ij| the pointer-basis moduli,
//
//   p rho_i = (rho P_i + P_i rho)/2 - lambda (sum_{j != i} |rho_ij|) P_i
//             + lambda sum_{k != i} |rho_ik| P_k.
//
// The lambda terms are traceless, so rho_i keeps unit trace for every lambda.
// Requires a rank-1 family (kInvalidFamily otherwise) and
// p > kMinProbability (kZeroProbability).
ReductionOutcome reduce_lambda(const DensityMatrix& rho,
                               const ProjectorFamily& family,
                               std::size_t index, double lambda);

// (rho P + P rho) / (2 Tr[rho P]). Negative probabilities are accepted; only
// |Tr[rho P]| <= kMinProbability is rejected.
ReductionOutcome reduce_modified(const DensityMatrix& rho, const Projector& p);

// sum_n p_n rho_n over reduce_lambda outcomes. Equals rho for every lambda.
DensityMatrix unread_mixture_lambda(const DensityMatrix& rho,
                                    const ProjectorFamily& family,
                                    double lambda);

enum class EventClass { kBranches, kCertainTrue, kCertainFalse, kOutOfRange };

const char* to_string(EventClass c) noexcept;

// Classifies p = Tr[rho P]: an event can only be produced when
// tol < p < 1 - tol. OutOfRange (p < -tol or p > 1 + tol) only occurs for
// non-positive states.
EventClass event_condition(const DensityMatrix& rho, const Projector& p,
                           double tol = kDefaultEventTolerance);
EventClass classify_probability(double p, double tol = kDefaultEventTolerance);

// Frobenius distance between the standard and modified post-states.
double postulate_distance(const DensityMatrix& rho, const Projector& p);

}  // namespace qreduce
