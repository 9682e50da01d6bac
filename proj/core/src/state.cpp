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
#include "qreduce/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qreduce/error.hpp"

namespace qreduce {

namespace {

double scaled_tol(const ComplexMatrix& m, double tol) {
  return tol * std::max(1.0, m.max_abs());
}

}  // namespace

const char* to_string(Positivity p) noexcept {
  switch (p) {
    case Positivity::kPositive: return "positive";
    case Positivity::kQuasiPositive: return "quasi-positive";
    case Positivity::kIndefinite: return "indefinite";
  }
  return "unknown";
}

double DensityMatrix::negativity() const noexcept {
  return min_eigenvalue() < -kPositivityFloor ? -min_eigenvalue() : 0.0;
}

DensityMatrix make_density(const ComplexMatrix& m, double quasi_threshold) {
  if (!(quasi_threshold >= 0.0))
    throw Error(ErrorCode::kInvalidArgument,
                "quasi-positivity threshold must be non-negative");
  const double tol = scaled_tol(m, kDefaultTolerance);
  if (!m.is_hermitian(tol))
    throw Error(ErrorCode::kNotHermitian, "density matrix is not Hermitian");
  ComplexMatrix h = m.hermitian_part();
  const double tr = h.trace().real();
  if (std::abs(tr - 1.0) > tol) {
    std::ostringstream os;
    os.precision(17);
    os << "density matrix trace is " << tr << ", expected 1";
    throw Error(ErrorCode::kTraceNotUnit, os.str());
  }
  std::vector<double> spectrum = hermitian_eigensystem(h).values;
  const double lo = spectrum.front();
  Positivity cls = Positivity::kIndefinite;
  if (lo >= -kPositivityFloor)
    cls = Positivity::kPositive;
  else if (lo >= -quasi_threshold)
    cls = Positivity::kQuasiPositive;
  return DensityMatrix(std::move(h), std::move(spectrum), cls, quasi_threshold);
}

Projector make_projector(const ComplexMatrix& m, double tol) {
  if (!m.is_hermitian(tol))
    throw Error(ErrorCode::kNotProjector, "projector is not Hermitian");
  const ComplexMatrix sq = m * m;
  if ((sq - m).max_abs() > tol)
    throw Error(ErrorCode::kNotProjector, "projector is not idempotent");
  const double tr = m.trace().real();
  return Projector(m.hermitian_part(),
                   static_cast<std::size_t>(std::llround(std::max(tr, 0.0))));
}

Projector projector_onto(std::span<const Complex> v) {
  double norm2 = 0.0;
  for (const auto& z : v) norm2 += std::norm(z);
  if (!(norm2 > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "cannot project onto zero vector");
  ComplexMatrix p = ComplexMatrix::outer(v);
  p *= 1.0 / norm2;
  return make_projector(p);
}

Projector bloch_projector(const std::array<double, 3>& n) {
  const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  if (!(len > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "Bloch direction must be nonzero");
  ComplexMatrix p = ComplexMatrix::identity(2);
  p += pauli_x() * (n[0] / len);
  p += pauli_y() * (n[1] / len);
  p += pauli_z() * (n[2] / len);
  p *= 0.5;
  return make_projector(p);
}

bool ProjectorFamily::all_rank_one() const noexcept {
  return std::all_of(members_.begin(), members_.end(),
                     [](const Projector& p) { return p.rank() == 1; });
}

ProjectorFamily make_family(std::vector<Projector> members, double tol) {
  if (members.empty())
    throw Error(ErrorCode::kInvalidFamily, "projector family is empty");
  const std::size_t dim = members.front().dim();
  ComplexMatrix sum(dim);
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].dim() != dim)
      throw Error(ErrorCode::kInvalidFamily,
                  "projector family members differ in dimension");
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      if (members[j].dim() != dim) continue;
      if ((members[i].matrix() * members[j].matrix()).max_abs() > tol) {
        std::ostringstream os;
        os << "projectors " << i << " and " << j << " are not orthogonal";
        throw Error(ErrorCode::kInvalidFamily, os.str());
      }
    }
    sum += members[i].matrix();
  }
  if ((sum - ComplexMatrix::identity(dim)).max_abs() > tol)
    throw Error(ErrorCode::kInvalidFamily,
                "projector family does not sum to the identity");
  return ProjectorFamily(std::move(members));
}

ProjectorFamily pointer_family(std::size_t dim) {
  std::vector<Projector> members;
  members.reserve(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    ComplexMatrix p(dim);
    p(k, k) = 1.0;
    members.push_back(make_projector(p));
  }
  return make_family(std::move(members));
}

Observable make_observable(const ComplexMatrix& m) {
  EigenSystem es = hermitian_eigensystem(m);
  return Observable(m.hermitian_part(), std::move(es));
}

ProjectorFamily spectral_projectors(const Observable& a,
                                    std::span<const IndexSet> partition) {
  const std::size_t n = a.dim();
  const auto& values = a.spectrum().values;
  std::vector<std::size_t> owner(n, partition.size());
  for (std::size_t s = 0; s < partition.size(); ++s) {
    if (partition[s].empty())
      throw Error(ErrorCode::kBadPartition, "partition contains an empty set");
    for (std::size_t idx : partition[s]) {
      if (idx >= n)
        throw Error(ErrorCode::kBadPartition,
                    "partition index out of range");
      if (owner[idx] != partition.size())
        throw Error(ErrorCode::kBadPartition,
                    "partition uses an eigenvalue index twice");
      owner[idx] = s;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (owner[i] == partition.size())
      throw Error(ErrorCode::kBadPartition,
                  "partition does not cover every eigenvalue index");
  // Values are ascending, so degenerate clusters are contiguous.
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (values[i + 1] - values[i] <= kDegeneracyTolerance &&
        owner[i] != owner[i + 1])
      throw Error(ErrorCode::kDegenerateSplit,
                  "partition splits a degenerate eigenvalue cluster");

  std::vector<Projector> members;
  members.reserve(partition.size());
  for (const auto& set : partition) {
    ComplexMatrix p(n);
    for (std::size_t idx : set) p += ComplexMatrix::outer(a.spectrum().vector(idx));
    members.push_back(make_projector(p));
  }
  return make_family(std::move(members));
}

DensityMatrix evolve(const DensityMatrix& rho, const ComplexMatrix& u) {
  if (u.dim() != rho.dim())
    throw Error(ErrorCode::kDimensionMismatch, "evolve: dimension mismatch");
  if (!u.is_unitary())
    throw Error(ErrorCode::kNotUnitary, "evolve: operator is not unitary");
  return make_density(u * rho.matrix() * u.adjoint(), rho.quasi_threshold());
}

ComplexMatrix partial_trace(const ComplexMatrix& joint,
                            std::span<const std::size_t> dims,
                            std::size_t keep) {
  if (dims.empty() || keep >= dims.size())
    throw Error(ErrorCode::kDimensionMismatch,
                "partial_trace: kept factor out of range");
  std::size_t total = 1;
  for (std::size_t d : dims) {
    if (d == 0)
      throw Error(ErrorCode::kDimensionMismatch,
                  "partial_trace: zero factor dimension");
    total *= d;
  }
  if (total != joint.dim())
    throw Error(ErrorCode::kDimensionMismatch,
                "partial_trace: factor dimensions do not match joint state");

  // joint index = (outer * d_keep + k) * inner + r
  std::size_t inner = 1;
  for (std::size_t f = keep + 1; f < dims.size(); ++f) inner *= dims[f];
  const std::size_t dk = dims[keep];
  const std::size_t outer = total / (inner * dk);

  ComplexMatrix out(dk);
  for (std::size_t i = 0; i < dk; ++i)
    for (std::size_t j = 0; j < dk; ++j) {
      Complex sum = 0.0;
      for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t r = 0; r < inner; ++r)
          sum += joint((o * dk + i) * inner + r, (o * dk + j) * inner + r);
      out(i, j) = sum;
    }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& joint,
                            std::span<const std::size_t> dims,
                            std::size_t keep) {
  return make_density(partial_trace(joint.matrix(), dims, keep),
                      joint.quasi_threshold());
}

double event_probability(const DensityMatrix& rho, const Projector& p) {
  if (rho.dim() != p.dim())
    throw Error(ErrorCode::kDimensionMismatch,
                "event_probability: dimension mismatch");
  const Complex tr = trace_of_product(rho.matrix(), p.matrix());
  if (std::abs(tr.imag()) > 1e-8)
    throw Error(ErrorCode::kImaginaryResidue,
                "event_probability: Tr[rho P] has an imaginary part");
  return tr.real();
}

std::array<double, 3> bloch_vector(const DensityMatrix& rho) {
  if (rho.dim() != 2)
    throw Error(ErrorCode::kDimensionMismatch,
                "bloch_vector: state must be a qubit");
  const ComplexMatrix& m = rho.matrix();
  return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(),
          (m(0, 0) - m(1, 1)).real()};
}

}  // namespace qreduce
