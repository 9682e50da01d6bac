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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qreduce {

using Complex = std::complex<double>;

// Structural tolerance used for Hermiticity, unitarity, idempotence and trace
// checks throughout the library.
inline constexpr double kDefaultTolerance = 1e-10;

// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() : ComplexMatrix(1) {}
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix zeros(std::size_t dim) { return ComplexMatrix(dim); }
  static ComplexMatrix diagonal(std::span<const double> values);
  // |v><v|
  static ComplexMatrix outer(std::span<const Complex> v);

  std::size_t dim() const noexcept { return dim_; }

  Complex& operator()(std::size_t row, std::size_t col) {
    return data_[row * dim_ + col];
  }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return data_[row * dim_ + col];
  }

  std::span<const Complex> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  // Largest |entry|.
  double max_abs() const;
  bool is_hermitian(double tol = kDefaultTolerance) const;
  bool is_unitary(double tol = kDefaultTolerance) const;
  // (M + M^dagger) / 2
  ComplexMatrix hermitian_part() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    return lhs += rhs;
  }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    return lhs -= rhs;
  }
  friend ComplexMatrix operator*(ComplexMatrix m, Complex s) { return m *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs,
                                 const ComplexMatrix& rhs);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t dim_;
  std::vector<Complex> data_;
};

// Tr[A B] without forming the product.
Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Pauli matrices.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

// Eigen-decomposition of a Hermitian matrix. Columns of `vectors` are the
// orthonormal eigenvectors belonging to `values` (ascending).
struct EigenSystem {
  std::vector<double> values;
  ComplexMatrix vectors;

  // V diag(values) V^dagger
  ComplexMatrix reconstruct() const;
  std::vector<Complex> vector(std::size_t k) const;
};

// A B + B A
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

// Cyclic complex Jacobi. Eigenvalues ascending; each eigenvector has its first
// non-negligible component real and positive; exactly tied eigenvalues are
// ordered lexicographically by eigenvector entries. Throws kNotHermitian or
// kNotConverged.
EigenSystem hermitian_eigensystem(const ComplexMatrix& h,
                                  double tol = kDefaultTolerance);

// exp(-i H t), hbar = 1.
ComplexMatrix unitary_exp(const ComplexMatrix& h, double t);

double frobenius_norm(const ComplexMatrix& a);
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qreduce
