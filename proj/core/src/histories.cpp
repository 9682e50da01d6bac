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
#include "qreduce/histories.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qreduce/error.hpp"

namespace qreduce {

namespace {

double real_trace(Complex tr, const char* op) {
  if (std::abs(tr.imag()) > 1e-8)
    throw Error(ErrorCode::kImaginaryResidue,
                std::string(op) + ": probability has an imaginary part");
  return tr.real();
}

ComplexMatrix half_anticommutator(const ComplexMatrix& q,
                                  const ComplexMatrix& x) {
  ComplexMatrix out = anticommutator(q, x);
  out *= 0.5;
  return out;
}

// Calls visit(choice) for every element of the product of ranges [0, sizes[i]).
template <typename Visit>
void for_each_choice(std::span<const std::size_t> sizes, Visit&& visit) {
  std::vector<std::size_t> choice(sizes.size(), 0);
  if (std::any_of(sizes.begin(), sizes.end(),
                  [](std::size_t s) { return s == 0; }))
    return;
  while (true) {
    visit(std::as_const(choice));
    std::size_t k = sizes.size();
    while (k > 0) {
      --k;
      if (++choice[k] < sizes[k]) break;
      choice[k] = 0;
      if (k == 0) return;
    }
    if (sizes.empty()) return;
  }
}

std::vector<ComplexMatrix> branch_ops(const HistoryFamily& family,
                                      std::span<const std::size_t> choice) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(choice.size());
  for (std::size_t s = 0; s < choice.size(); ++s)
    ops.push_back(family.evolved(s, choice[s]));
  return ops;
}

struct CoarseMember {
  unsigned mask;
  ComplexMatrix op;
};

std::string describe(std::span<const CoarseMember* const> path) {
  std::ostringstream os;
  for (std::size_t s = 0; s < path.size(); ++s) {
    if (s) os << ' ';
    os << 't' << s << ":{";
    bool first = true;
    for (unsigned bit = 0; bit < 32; ++bit)
      if (path[s]->mask & (1u << bit)) {
        if (!first) os << ',';
        os << bit;
        first = false;
      }
    os << '}';
  }
  return os.str();
}

bool is_singleton(unsigned mask) { return mask && !(mask & (mask - 1)); }

std::size_t singleton_index(unsigned mask) {
  std::size_t i = 0;
  while (!(mask & 1u)) {
    mask >>= 1;
    ++i;
  }
  return i;
}

class ConsistencyWalker {
 public:
  ConsistencyWalker(const std::vector<std::vector<CoarseMember>>& slots,
                    double tol, ConsistencyReport& report)
      : slots_(slots), tol_(tol), report_(report), path_(slots.size()) {}

  void walk(const ComplexMatrix& x, std::size_t slot) {
    const bool last = slot + 1 == slots_.size();
    for (const CoarseMember& member : slots_[slot]) {
      path_[slot] = &member;
      if (!last) {
        walk(half_anticommutator(member.op, x), slot + 1);
        continue;
      }
      const double p =
          real_trace(trace_of_product(member.op, x), "check_consistency");
      ++report_.branches_checked;
      if (p < -tol_ || p > 1.0 + tol_)
        report_.violations.push_back({describe(path_), p});
      if (std::all_of(path_.begin(), path_.end(), [](const CoarseMember* m) {
            return is_singleton(m->mask);
          })) {
        std::vector<std::size_t> fine(path_.size());
        for (std::size_t s = 0; s < path_.size(); ++s)
          fine[s] = singleton_index(path_[s]->mask);
        report_.probability_table.emplace(std::move(fine), p);
      }
    }
  }

 private:
  const std::vector<std::vector<CoarseMember>>& slots_;
  double tol_;
  ConsistencyReport& report_;
  std::vector<const CoarseMember*> path_;
};

}  // namespace

Projector heisenberg_projector(const Projector& p, const ComplexMatrix& h,
                               double t) {
  if (p.dim() != h.dim())
    throw Error(ErrorCode::kDimensionMismatch,
                "heisenberg_projector: dimension mismatch");
  const ComplexMatrix u = unitary_exp(h, t);
  return make_projector(u.adjoint() * p.matrix() * u);
}

std::size_t HistoryFamily::num_branches() const noexcept {
  std::size_t n = 1;
  for (const auto& f : slots_) n *= f.size();
  return n;
}

HistoryFamily make_history_family(DensityMatrix rho, ComplexMatrix hamiltonian,
                                  std::vector<double> times,
                                  std::vector<ProjectorFamily> slots) {
  if (slots.empty())
    throw Error(ErrorCode::kInvalidArgument, "history family has no slots");
  if (times.size() != slots.size())
    throw Error(ErrorCode::kInvalidArgument,
                "history family needs one time per slot");
  for (std::size_t i = 0; i + 1 < times.size(); ++i)
    if (!(times[i] < times[i + 1]))
      throw Error(ErrorCode::kInvalidArgument,
                  "history time grid must be strictly increasing");
  if (hamiltonian.dim() != rho.dim())
    throw Error(ErrorCode::kDimensionMismatch,
                "Hamiltonian and initial state differ in dimension");
  if (!hamiltonian.is_hermitian(kDefaultTolerance *
                                std::max(1.0, hamiltonian.max_abs())))
    throw Error(ErrorCode::kNotHermitian, "Hamiltonian is not Hermitian");
  for (const auto& f : slots)
    if (f.dim() != rho.dim())
      throw Error(ErrorCode::kDimensionMismatch,
                  "slot family and initial state differ in dimension");

  std::vector<std::vector<ComplexMatrix>> evolved;
  evolved.reserve(slots.size());
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const ComplexMatrix u = unitary_exp(hamiltonian, times[s]);
    const ComplexMatrix ud = u.adjoint();
    std::vector<ComplexMatrix> ops;
    ops.reserve(slots[s].size());
    for (const auto& p : slots[s].members())
      ops.push_back((ud * p.matrix() * u).hermitian_part());
    evolved.push_back(std::move(ops));
  }
  return HistoryFamily(std::move(rho), std::move(hamiltonian), std::move(times),
                       std::move(slots), std::move(evolved));
}

History::History(const HistoryFamily& family, std::vector<std::size_t> choice)
    : family_(&family), choice_(std::move(choice)) {
  if (choice_.size() != family.num_slots())
    throw Error(ErrorCode::kInvalidArgument,
                "history needs one projector index per slot");
  for (std::size_t s = 0; s < choice_.size(); ++s)
    if (choice_[s] >= family.slots()[s].size())
      throw Error(ErrorCode::kInvalidArgument,
                  "history projector index out of range");
}

double chain_probability_modified(const ComplexMatrix& rho,
                                  std::span<const ComplexMatrix> ops) {
  if (ops.empty())
    throw Error(ErrorCode::kInvalidArgument, "empty history");
  ComplexMatrix x = rho;
  for (std::size_t k = 0; k + 1 < ops.size(); ++k)
    x = half_anticommutator(ops[k], x);
  return real_trace(trace_of_product(ops.back(), x),
                    "history_probability_modified");
}

double chain_probability_standard(const ComplexMatrix& rho,
                                  std::span<const ComplexMatrix> ops) {
  if (ops.empty())
    throw Error(ErrorCode::kInvalidArgument, "empty history");
  ComplexMatrix c = ops.front();
  for (std::size_t k = 1; k < ops.size(); ++k) c = ops[k] * c;
  return real_trace((c * rho * c.adjoint()).trace(),
                    "history_probability_standard");
}

double history_probability_modified(const History& h) {
  const auto ops = branch_ops(h.family(), h.choice());
  return chain_probability_modified(h.family().initial_state().matrix(), ops);
}

double history_probability_standard(const History& h) {
  const auto ops = branch_ops(h.family(), h.choice());
  return chain_probability_standard(h.family().initial_state().matrix(), ops);
}

ConsistencyReport check_consistency(const HistoryFamily& family, double tol) {
  double product = 1.0;
  for (const auto& f : family.slots()) product *= std::ldexp(1.0, static_cast<int>(f.size()));
  if (product > kMaxCoarseGrainingProduct) {
    std::ostringstream os;
    os << "coarse-graining enumeration needs " << product
       << " combinations, cap is " << kMaxCoarseGrainingProduct;
    throw Error(ErrorCode::kCapExceeded, os.str());
  }

  std::vector<std::vector<CoarseMember>> coarse(family.num_slots());
  for (std::size_t s = 0; s < family.num_slots(); ++s) {
    const std::size_t m = family.slots()[s].size();
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
      ComplexMatrix op(family.initial_state().dim());
      for (std::size_t k = 0; k < m; ++k)
        if (mask & (1u << k)) op += family.evolved(s, k);
      coarse[s].push_back({mask, std::move(op)});
    }
  }

  ConsistencyReport report;
  ConsistencyWalker walker(coarse, tol, report);
  walker.walk(family.initial_state().matrix(), 0);
  report.consistent = report.violations.empty();
  return report;
}

double additivity_residual(const HistoryFamily& family, std::size_t slot,
                           std::pair<std::size_t, std::size_t> parts) {
  if (slot >= family.num_slots())
    throw Error(ErrorCode::kInvalidArgument, "additivity: slot out of range");
  const std::size_t m = family.slots()[slot].size();
  if (parts.first == parts.second || parts.first >= m || parts.second >= m)
    throw Error(ErrorCode::kInvalidArgument,
                "additivity: parts must be two distinct members of the slot");

  std::vector<std::size_t> sizes;
  for (const auto& f : family.slots()) sizes.push_back(f.size());
  sizes[slot] = 1;  // the merged slot is handled explicitly

  const ComplexMatrix& rho = family.initial_state().matrix();
  double worst = 0.0;
  for_each_choice(sizes, [&](const std::vector<std::size_t>& choice) {
    std::vector<std::size_t> branch = choice;
    branch[slot] = parts.first;
    auto ops = branch_ops(family, branch);
    const double p1 = chain_probability_modified(rho, ops);
    ops[slot] = family.evolved(slot, parts.second);
    const double p2 = chain_probability_modified(rho, ops);
    ops[slot] = family.evolved(slot, parts.first) +
                family.evolved(slot, parts.second);
    const double merged = chain_probability_modified(rho, ops);
    worst = std::max(worst, std::abs(merged - p1 - p2));
  });
  return worst;
}

double marginalization_residual(const HistoryFamily& family) {
  const std::size_t n = family.num_slots();
  if (n < 2)
    throw Error(ErrorCode::kInvalidArgument,
                "marginalization needs at least two slots");
  std::vector<std::size_t> sizes;
  for (std::size_t s = 0; s + 1 < n; ++s) sizes.push_back(family.slots()[s].size());

  const ComplexMatrix& rho = family.initial_state().matrix();
  const std::size_t last = family.slots()[n - 1].size();
  double worst = 0.0;
  for_each_choice(sizes, [&](const std::vector<std::size_t>& choice) {
    auto ops = branch_ops(family, choice);
    const double truncated = chain_probability_modified(rho, ops);
    ops.push_back(family.evolved(n - 1, 0));
    double sum = 0.0;
    for (std::size_t m = 0; m < last; ++m) {
      ops.back() = family.evolved(n - 1, m);
      sum += chain_probability_modified(rho, ops);
    }
    worst = std::max(worst, std::abs(sum - truncated));
  });
  return worst;
}

}  // namespace qreduce
