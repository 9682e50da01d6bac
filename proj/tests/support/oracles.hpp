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

// Independent reference computations used to freeze expected values. None of
// these call the routine they are checking.

#include <array>
#include <cmath>
#include <vector>

#include "qreduce/matrix.hpp"

namespace qreduce::testing {

// Eigenvalues of [[a, b], [conj(b), d]] in ascending order.
inline std::array<double, 2> eig2(double a, Complex b, double d) {
  const double mean = 0.5 * (a + d);
  const double radius = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
  return {mean - radius, mean + radius};
}

// Matrix exponential exp(M) by scaling and squaring of a Taylor series.
inline ComplexMatrix expm_taylor(const ComplexMatrix& m) {
  double norm = 0.0;
  for (const auto& z : m.data()) norm += std::abs(z);
  int squarings = 0;
  while (norm > 0.5) {
    norm /= 2.0;
    ++squarings;
  }
  const ComplexMatrix scaled = m * std::ldexp(1.0, -squarings);
  ComplexMatrix term = ComplexMatrix::identity(m.dim());
  ComplexMatrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * scaled;
    term *= 1.0 / k;
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

// Partial trace by decoding every joint index into per-factor digits.
inline ComplexMatrix partial_trace_digits(const ComplexMatrix& joint,
                                          const std::vector<std::size_t>& dims,
                                          std::size_t keep) {
  const std::size_t n = joint.dim();
  auto digits = [&](std::size_t idx) {
    std::vector<std::size_t> out(dims.size());
    for (std::size_t f = dims.size(); f-- > 0;) {
      out[f] = idx % dims[f];
      idx /= dims[f];
    }
    return out;
  };
  ComplexMatrix out(dims[keep]);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      auto dr = digits(r);
      auto dc = digits(c);
      bool traced_equal = true;
      for (std::size_t f = 0; f < dims.size(); ++f)
        if (f != keep && dr[f] != dc[f]) traced_equal = false;
      if (traced_equal) out(dr[keep], dc[keep]) += joint(r, c);
    }
  return out;
}

// Entries of B = V^dagger rho V with (i, j) in different groups set to zero,
// rotated back. group[k] names the block of basis column k.
inline ComplexMatrix block_mask(const ComplexMatrix& rho, const ComplexMatrix& v,
                                const std::vector<std::size_t>& group) {
  ComplexMatrix b = v.adjoint() * rho * v;
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j)
      if (group[i] != group[j]) b(i, j) = 0.0;
  return v * b * v.adjoint();
}

// Two-event chain on a qubit with H = 0, rho = |up><up|, first projector onto
// +x and second onto cos(phi)|up> + sin(phi)|down>, evaluated from amplitudes.
struct TwoEventValues {
  double modified;
  double standard;
};

inline TwoEventValues two_event_chain(double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const double psi_plus = (c + s) / std::sqrt(2.0);  // <psi|+x>
  const double plus_up = 1.0 / std::sqrt(2.0);       // <+x|up>
  const double up_psi = c;                           // <up|psi>
  // Tr[P2 (P1 rho + rho P1)/2] = Re(<psi|+x><+x|up><up|psi>)
  const double modified = psi_plus * plus_up * up_psi;
  // |<psi|+x>|^2 |<+x|up>|^2
  const double standard = psi_plus * psi_plus * plus_up * plus_up;
  return {modified, standard};
}

// Width of {theta : n(theta) . r >= 1} for the Bloch vector reached by the
// window-scan protocol on [[a2, z], [z, 1 - a2]] with real z: after the
// modified reduction r = (z/a2, 0, 1); the half-turn about y maps it to
// (1, 0, -z/a2), so the window is 2 arccos(1/sqrt(1 + (z/a2)^2)).
inline double window_width_oracle(double a2, double z) {
  // Cap n . r >= 1 with r = (1, 0, -u): half-angle atan(|u|).
  return 2.0 * std::atan(std::abs(z / a2));
}

inline double window_center_oracle(double a2, double z) {
  return std::atan2(1.0, -z / a2);
}

}  // namespace qreduce::testing
