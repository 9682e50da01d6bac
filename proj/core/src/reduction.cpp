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
#include "qreduce/reduction.hpp"

#include <cmath>

#include "qreduce/error.hpp"

namespace qreduce {

namespace {

void require_dim(const DensityMatrix& rho, std::size_t dim, const char* op) {
  if (rho.dim() != dim)
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(op) + ": dimension mismatch");
}

// |<e_i|rho|e_j>| for rank-1 P_i = |e_i><e_i|, P_j = |e_j><e_j|, written
// basis-free as sqrt(Tr[P_i rho P_j rho]).
double pointer_modulus(const ComplexMatrix& rho, const ComplexMatrix& pi,
                       const ComplexMatrix& pj) {
  const double sq = trace_of_product(pi * rho, pj * rho).real();
  return std::sqrt(std::max(sq, 0.0));
}

// p_i rho_i for the lambda family (unnormalized post-state).
ComplexMatrix lambda_numerator(const DensityMatrix& rho,
                               const ProjectorFamily& family, std::size_t index,
                               double lambda) {
  const ComplexMatrix& r = rho.matrix();
  const ComplexMatrix& pi = family[index].matrix();
  ComplexMatrix out = anticommutator(r, pi) * 0.5;
  if (lambda == 0.0) return out;
  double total = 0.0;
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (k == index) continue;
    const double modulus = pointer_modulus(r, pi, family[k].matrix());
    total += modulus;
    out += family[k].matrix() * (lambda * modulus);
  }
  out -= pi * (lambda * total);
  return out;
}

void require_rank_one(const ProjectorFamily& family) {
  if (!family.all_rank_one())
    throw Error(ErrorCode::kInvalidFamily,
                "lambda reduction needs a rank-1 (pointer basis) family");
}

}  // namespace

ReductionOutcome reduce_standard(const DensityMatrix& rho, const Projector& p) {
  require_dim(rho, p.dim(), "reduce_standard");
  const double prob = event_probability(rho, p);
  if (prob <= kMinProbability)
    throw Error(ErrorCode::kZeroProbability,
                "reduce_standard: event probability is zero");
  ComplexMatrix post = p.matrix() * rho.matrix() * p.matrix();
  post *= 1.0 / prob;
  return {prob, make_density(post.hermitian_part(), rho.quasi_threshold()),
          {PostulateKind::kStandard, 0.0}};
}

DensityMatrix unread_mixture_standard(const DensityMatrix& rho,
                                      const ProjectorFamily& family) {
  require_dim(rho, family.dim(), "unread_mixture_standard");
  ComplexMatrix sum(rho.dim());
  for (const auto& p : family.members())
    sum += p.matrix() * rho.matrix() * p.matrix();
  return make_density(sum.hermitian_part(), rho.quasi_threshold());
}

ReductionOutcome reduce_lambda(const DensityMatrix& rho,
                               const ProjectorFamily& family,
                               std::size_t index, double lambda) {
  require_dim(rho, family.dim(), "reduce_lambda");
  require_rank_one(family);
  if (index >= family.size())
    throw Error(ErrorCode::kInvalidArgument,
                "reduce_lambda: projector index out of range");
  const double prob = event_probability(rho, family[index]);
  if (prob <= kMinProbability)
    throw Error(ErrorCode::kZeroProbability,
                "reduce_lambda: event probability is zero");
  ComplexMatrix post = lambda_numerator(rho, family, index, lambda);
  post *= 1.0 / prob;
  return {prob, make_density(post.hermitian_part(), rho.quasi_threshold()),
          {PostulateKind::kLambda, lambda}};
}

ReductionOutcome reduce_modified(const DensityMatrix& rho, const Projector& p) {
  require_dim(rho, p.dim(), "reduce_modified");
  const double prob = event_probability(rho, p);
  if (std::abs(prob) <= kMinProbability)
    throw Error(ErrorCode::kZeroProbability,
                "reduce_modified: event probability is zero");
  ComplexMatrix post = anticommutator(p.matrix(), rho.matrix());
  post *= 0.5 / prob;
  return {prob, make_density(post.hermitian_part(), rho.quasi_threshold()),
          {PostulateKind::kModified, 0.0}};
}

DensityMatrix unread_mixture_lambda(const DensityMatrix& rho,
                                    const ProjectorFamily& family,
                                    double lambda) {
  require_dim(rho, family.dim(), "unread_mixture_lambda");
  require_rank_one(family);
  ComplexMatrix sum(rho.dim());
  for (std::size_t n = 0; n < family.size(); ++n) {
    // p_n rho_n; taken from the outcome when defined, otherwise the
    // unnormalized numerator (which is what p_n rho_n means at p_n = 0).
    if (event_probability(rho, family[n]) > kMinProbability) {
      const ReductionOutcome out = reduce_lambda(rho, family, n, lambda);
      sum += out.post_state.matrix() * out.probability;
    } else {
      sum += lambda_numerator(rho, family, n, lambda);
    }
  }
  return make_density(sum.hermitian_part(), rho.quasi_threshold());
}

const char* to_string(EventClass c) noexcept {
  switch (c) {
    case EventClass::kBranches: return "Branches";
    case EventClass::kCertainTrue: return "CertainTrue";
    case EventClass::kCertainFalse: return "CertainFalse";
    case EventClass::kOutOfRange: return "OutOfRange";
  }
  return "unknown";
}

EventClass classify_probability(double p, double tol) {
  if (p < -tol || p > 1.0 + tol) return EventClass::kOutOfRange;
  if (std::abs(p) <= tol) return EventClass::kCertainFalse;
  if (p >= 1.0 - tol) return EventClass::kCertainTrue;
  return EventClass::kBranches;
}

EventClass event_condition(const DensityMatrix& rho, const Projector& p,
                           double tol) {
  return classify_probability(event_probability(rho, p), tol);
}

double postulate_distance(const DensityMatrix& rho, const Projector& p) {
  const ReductionOutcome standard = reduce_standard(rho, p);
  const ReductionOutcome modified = reduce_modified(rho, p);
  return frobenius_distance(standard.post_state.matrix(),
                            modified.post_state.matrix());
}

}  // namespace qreduce
