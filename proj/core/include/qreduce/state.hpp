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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "qreduce/matrix.hpp"

namespace qreduce {

// Default bound on |min eigenvalue| below which a non-positive state still
// counts as quasi-positive. Scenario dependent; callers usually pass their own.
inline constexpr double kDefaultQuasiThreshold = 1e-3;
// Eigenvalues at or above -kPositivityFloor count as non-negative.
inline constexpr double kPositivityFloor = 1e-12;
// Eigenvalues closer than this belong to the same spectral cluster.
inline constexpr double kDegeneracyTolerance = 1e-8;

enum class Positivity { kPositive, kQuasiPositive, kIndefinite };

const char* to_string(Positivity p) noexcept;

// Hermitian, unit-trace matrix together with its spectrum and positivity
// class. Non-positive matrices are accepted; the class records how far from
// positive they are.
class DensityMatrix {
 public:
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.dim(); }
  const std::vector<double>& eigenvalues() const noexcept { return spectrum_; }
  double min_eigenvalue() const noexcept { return spectrum_.front(); }
  Positivity positivity() const noexcept { return positivity_; }
  // |min eigenvalue| when negative beyond the floor, else 0.
  double negativity() const noexcept;
  double quasi_threshold() const noexcept { return quasi_threshold_; }

 private:
  friend DensityMatrix make_density(const ComplexMatrix&, double);
  DensityMatrix(ComplexMatrix m, std::vector<double> spectrum,
                Positivity positivity, double quasi_threshold)
      : matrix_(std::move(m)),
        spectrum_(std::move(spectrum)),
        positivity_(positivity),
        quasi_threshold_(quasi_threshold) {}

  ComplexMatrix matrix_;
  std::vector<double> spectrum_;
  Positivity positivity_;
  double quasi_threshold_;
};

// Throws kNotHermitian or kTraceNotUnit. The stored matrix is the exact
// Hermitian part of m.
DensityMatrix make_density(const ComplexMatrix& m,
                           double quasi_threshold = kDefaultQuasiThreshold);

class Projector {
 public:
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.dim(); }
  std::size_t rank() const noexcept { return rank_; }

 private:
  friend Projector make_projector(const ComplexMatrix&, double);
  Projector(ComplexMatrix m, std::size_t rank)
      : matrix_(std::move(m)), rank_(rank) {}

  ComplexMatrix matrix_;
  std::size_t rank_;
};

// Throws kNotProjector unless P = P^dagger and P^2 = P within tol.
Projector make_projector(const ComplexMatrix& m,
                         double tol = kDefaultTolerance);
// Rank-1 projector onto span{v}; v need not be normalized.
Projector projector_onto(std::span<const Complex> v);
// Qubit projector (I + n.sigma)/2 for the unit vector along n.
Projector bloch_projector(const std::array<double, 3>& n);

// Pairwise orthogonal projectors summing to the identity.
class ProjectorFamily {
 public:
  std::size_t size() const noexcept { return members_.size(); }
  std::size_t dim() const noexcept { return members_.front().dim(); }
  const Projector& operator[](std::size_t i) const { return members_.at(i); }
  const std::vector<Projector>& members() const noexcept { return members_; }
  bool all_rank_one() const noexcept;

 private:
  friend ProjectorFamily make_family(std::vector<Projector>, double);
  explicit ProjectorFamily(std::vector<Projector> members)
      : members_(std::move(members)) {}

  std::vector<Projector> members_;
};

// Throws kInvalidFamily (empty, mixed dims, overlap, or incomplete).
ProjectorFamily make_family(std::vector<Projector> members,
                            double tol = kDefaultTolerance);
// Computational-basis family {|0><0|, ..., |d-1><d-1|}.
ProjectorFamily pointer_family(std::size_t dim);

class Observable {
 public:
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const EigenSystem& spectrum() const noexcept { return spectrum_; }
  std::size_t dim() const noexcept { return matrix_.dim(); }

 private:
  friend Observable make_observable(const ComplexMatrix&);
  Observable(ComplexMatrix m, EigenSystem es)
      : matrix_(std::move(m)), spectrum_(std::move(es)) {}

  ComplexMatrix matrix_;
  EigenSystem spectrum_;
};

Observable make_observable(const ComplexMatrix& m);

using IndexSet = std::vector<std::size_t>;

// One projector per index set; indices refer to the observable's ascending
// eigenvalue order. Throws kBadPartition when indices are missing, repeated or
// out of range, and kDegenerateSplit when a degenerate cluster straddles sets.
ProjectorFamily spectral_projectors(const Observable& a,
                                    std::span<const IndexSet> partition);

// U rho U^dagger. Throws kNotUnitary.
DensityMatrix evolve(const DensityMatrix& rho, const ComplexMatrix& u);

// Reduced matrix on factor `keep` of a tensor product with factor dimensions
// `dims` (factor 0 most significant).
ComplexMatrix partial_trace(const ComplexMatrix& joint,
                            std::span<const std::size_t> dims,
                            std::size_t keep);
DensityMatrix partial_trace(const DensityMatrix& joint,
                            std::span<const std::size_t> dims,
                            std::size_t keep);

// Tr[rho P]. Not clamped: quasi-positive states can give values outside
// [0, 1]. Throws kImaginaryResidue if |Im| > 1e-8.
double event_probability(const DensityMatrix& rho, const Projector& p);

// (Tr[rho sigma_x], Tr[rho sigma_y], Tr[rho sigma_z]). Throws
// kDimensionMismatch unless dim == 2.
std::array<double, 3> bloch_vector(const DensityMatrix& rho);

}  // namespace qreduce
