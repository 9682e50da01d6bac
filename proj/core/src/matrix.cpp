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
#include "qreduce/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qreduce/error.hpp"

namespace qreduce {

namespace {

constexpr int kMaxJacobiSweeps = 100;

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b,
                      const char* op) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << op << ": dimension mismatch (" << a.dim() << " vs " << b.dim()
       << ")";
    throw Error(ErrorCode::kDimensionMismatch, os.str());
  }
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

// Applies A <- G^dagger A G and V <- V G for the 2x2 unitary G acting on the
// (p, q) coordinate plane that annihilates A(p, q).
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p,
                   std::size_t q) {
  const Complex beta = a(p, q);
  const double mag = std::abs(beta);
  if (mag == 0.0) return;
  const Complex phase = beta / mag;
  const double alpha = a(p, p).real();
  const double gamma = a(q, q).real();
  const double theta = (gamma - alpha) / (2.0 * mag);
  double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  if (theta < 0.0) t = -t;
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  // G = [[c, s], [-s conj(phase), c conj(phase)]]
  const Complex g_pp = c;
  const Complex g_pq = s;
  const Complex g_qp = -s * std::conj(phase);
  const Complex g_qq = c * std::conj(phase);

  const std::size_t n = a.dim();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex x = a(k, p);
    const Complex y = a(k, q);
    a(k, p) = x * g_pp + y * g_qp;
    a(k, q) = x * g_pq + y * g_qq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex x = a(p, k);
    const Complex y = a(q, k);
    a(p, k) = std::conj(g_pp) * x + std::conj(g_qp) * y;
    a(q, k) = std::conj(g_pq) * x + std::conj(g_qq) * y;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t k = 0; k < n; ++k) {
    const Complex x = v(k, p);
    const Complex y = v(k, q);
    v(k, p) = x * g_pp + y * g_qp;
    v(k, q) = x * g_pq + y * g_qq;
  }
}

bool lexicographically_less(std::span<const Complex> lhs,
                            std::span<const Complex> rhs) {
  constexpr double kEps = 1e-12;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (std::abs(lhs[i].real() - rhs[i].real()) > kEps)
      return lhs[i].real() < rhs[i].real();
    if (std::abs(lhs[i].imag() - rhs[i].imag()) > kEps)
      return lhs[i].imag() < rhs[i].imag();
  }
  return false;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim)
    : dim_(dim), data_(dim * dim, Complex{0.0, 0.0}) {
  if (dim == 0)
    throw Error(ErrorCode::kInvalidArgument, "matrix dimension must be >= 1");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (dim == 0)
    throw Error(ErrorCode::kInvalidArgument, "matrix dimension must be >= 1");
  if (data_.size() != dim * dim)
    throw Error(ErrorCode::kDimensionMismatch,
                "matrix entry count does not match dim*dim");
  for (const auto& z : data_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorCode::kNonFinite, "matrix entries must be finite");
}

ComplexMatrix::ComplexMatrix(
    std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
  if (dim_ == 0)
    throw Error(ErrorCode::kInvalidArgument, "matrix dimension must be >= 1");
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_)
      throw Error(ErrorCode::kDimensionMismatch, "matrix must be square");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> v) {
  ComplexMatrix m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex sum = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) sum += (*this)(i, i);
  return sum;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

bool ComplexMatrix::is_hermitian(double tol) const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol)
        return false;
  return true;
}

bool ComplexMatrix::is_unitary(double tol) const {
  const ComplexMatrix product = adjoint() * (*this);
  return frobenius_distance(product, identity(dim_)) <= tol;
}

ComplexMatrix ComplexMatrix::hermitian_part() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      out(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
  return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  require_same_dim(lhs, rhs, "operator*");
  const std::size_t n = lhs.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex l = lhs(i, k);
      if (l == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += l * rhs(k, j);
    }
  return out;
}

Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "trace_of_product");
  Complex sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t k = 0; k < a.dim(); ++k) sum += a(i, k) * b(k, i);
  return sum;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.dim() * b.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      for (std::size_t k = 0; k < b.dim(); ++k)
        for (std::size_t l = 0; l < b.dim(); ++l)
          out(i * b.dim() + k, j * b.dim() + l) = a(i, j) * b(k, l);
  return out;
}

ComplexMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix pauli_y() {
  return {{0.0, Complex{0.0, -1.0}}, {Complex{0.0, 1.0}, 0.0}};
}
ComplexMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

ComplexMatrix EigenSystem::reconstruct() const {
  const std::size_t n = vectors.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex sum = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        sum += vectors(i, k) * values[k] * std::conj(vectors(j, k));
      out(i, j) = sum;
    }
  return out;
}

std::vector<Complex> EigenSystem::vector(std::size_t k) const {
  std::vector<Complex> col(vectors.dim());
  for (std::size_t i = 0; i < vectors.dim(); ++i) col[i] = vectors(i, k);
  return col;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "anticommutator");
  return a * b + b * a;
}

EigenSystem hermitian_eigensystem(const ComplexMatrix& h, double tol) {
  const double scale = std::max(1.0, h.max_abs());
  if (!h.is_hermitian(tol * scale))
    throw Error(ErrorCode::kNotHermitian,
                "hermitian_eigensystem: input is not Hermitian");

  const std::size_t n = h.dim();
  ComplexMatrix a = h.hermitian_part();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double target = 1e-15 * std::max(frobenius_norm(a), 1e-300);

  int sweep = 0;
  for (; sweep < kMaxJacobiSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
  }
  if (sweep == kMaxJacobiSweeps && off_diagonal_norm(a) > target)
    throw Error(ErrorCode::kNotConverged,
                "hermitian_eigensystem: Jacobi sweeps did not converge");

  // Phase convention: first non-negligible component real and positive.
  std::vector<std::vector<Complex>> columns(n, std::vector<Complex>(n));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) columns[k][i] = v(i, k);
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::abs(columns[k][i]);
      if (mag > 1e-10) {
        const Complex rot = std::conj(columns[k][i]) / mag;
        for (auto& z : columns[k]) z *= rot;
        columns[k][i] = mag;
        break;
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return a(l, l).real() < a(r, r).real();
  });
  // Reorder exact ties lexicographically so output does not depend on the
  // rotation sequence.
  const double tie_eps = 1e-14 * scale;
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && a(order[end], order[end]).real() -
                              a(order[end - 1], order[end - 1]).real() <=
                          tie_eps)
      ++end;
    std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start),
                     order.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t l, std::size_t r) {
                       return lexicographically_less(columns[l], columns[r]);
                     });
    start = end;
  }

  EigenSystem out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = columns[order[k]][i];
  }
  return out;
}

ComplexMatrix unitary_exp(const ComplexMatrix& h, double t) {
  const EigenSystem es = hermitian_eigensystem(h);
  const std::size_t n = h.dim();
  std::vector<Complex> phases(n);
  for (std::size_t k = 0; k < n; ++k)
    phases[k] = std::polar(1.0, -es.values[k] * t);
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex sum = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        sum += es.vectors(i, k) * phases[k] * std::conj(es.vectors(j, k));
      out(i, j) = sum;
    }
  return out;
}

double frobenius_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (const auto& z : a.data()) sum += std::norm(z);
  return std::sqrt(sum);
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "frobenius_distance");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    sum += std::norm(a.data()[i] - b.data()[i]);
  return std::sqrt(sum);
}

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kNotHermitian: return "not Hermitian";
    case ErrorCode::kNotUnitary: return "not unitary";
    case ErrorCode::kNotProjector: return "not a projector";
    case ErrorCode::kInvalidFamily: return "invalid projector family";
    case ErrorCode::kTraceNotUnit: return "trace not unit";
    case ErrorCode::kNonFinite: return "non-finite entry";
    case ErrorCode::kNotConverged: return "not converged";
    case ErrorCode::kDegenerateSplit: return "degenerate eigenvalues split";
    case ErrorCode::kBadPartition: return "bad partition";
    case ErrorCode::kZeroProbability: return "probability too small";
    case ErrorCode::kImaginaryResidue: return "imaginary residue";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kCapExceeded: return "cap exceeded";
    case ErrorCode::kConfig: return "config error";
    case ErrorCode::kContractViolation: return "numerical contract violation";
  }
  return "unknown";
}

}  // namespace qreduce
