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
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qreduce/error.hpp"
#include "qreduce/histories.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace qreduce {
namespace {

using testing::Rng;

const double kPhi108 = 108.0 * std::numbers::pi / 180.0;

ProjectorFamily two_outcome(const std::vector<Complex>& v) {
  const ComplexMatrix p = ComplexMatrix::outer(v);
  return make_family({make_projector(p),
                      make_projector(ComplexMatrix::identity(2) - p)});
}

HistoryFamily family_108() {
  const double s = 1.0 / std::numbers::sqrt2;
  const DensityMatrix up = make_density({{1.0, 0.0}, {0.0, 0.0}});
  return make_history_family(
      up, ComplexMatrix(2), {0.0, 1.0},
      {two_outcome({s, s}),
       two_outcome({std::cos(kPhi108), std::sin(kPhi108)})});
}

// Schroedinger-picture evaluation with a Taylor exponential between events.
double schroedinger_chain(const HistoryFamily& fam,
                          const std::vector<std::size_t>& choice) {
  ComplexMatrix x = fam.initial_state().matrix();
  double now = 0.0;
  for (std::size_t s = 0; s < choice.size(); ++s) {
    const double dt = fam.times()[s] - now;
    now = fam.times()[s];
    const ComplexMatrix u =
        testing::expm_taylor(fam.hamiltonian() * Complex{0.0, -dt});
    x = u * x * u.adjoint();
    const ComplexMatrix& p = fam.slots()[s][choice[s]].matrix();
    if (s + 1 == choice.size()) return trace_of_product(p, x).real();
    x = (p * x + x * p) * 0.5;
  }
  return 0.0;
}

HistoryFamily random_family(std::size_t dim, std::size_t slots, Rng& rng,
                            const ComplexMatrix* state = nullptr) {
  std::vector<double> times;
  std::vector<ProjectorFamily> families;
  for (std::size_t s = 0; s < slots; ++s) {
    times.push_back(0.4 * static_cast<double>(s) + testing::uniform(rng, 0.0, 0.3));
    const std::size_t groups = 2 + rng() % (dim - 1);
    families.push_back(make_family(testing::random_coarse_members(dim, groups, rng)));
  }
  const ComplexMatrix rho = state ? *state : testing::random_density(dim, rng);
  return make_history_family(make_density(rho, 0.1),
                             testing::random_hermitian(dim, rng),
                             times, families);
}

TEST(HeisenbergProjector, Examples) {
  const Projector up = pointer_family(2)[0];
  EXPECT_LT(frobenius_distance(heisenberg_projector(up, pauli_x(), 0.0).matrix(),
                               up.matrix()),
            1e-15);
  EXPECT_LT(frobenius_distance(heisenberg_projector(up, ComplexMatrix(2), 3.0).matrix(),
                               up.matrix()),
            1e-15);
  const Projector rotated =
      heisenberg_projector(up, pauli_y() * 0.5, std::numbers::pi / 2.0);
  EXPECT_EQ(rotated.rank(), 1u);
  EXPECT_LT(frobenius_distance(rotated.matrix() * rotated.matrix(),
                               rotated.matrix()),
            1e-14);
  EXPECT_LT(frobenius_distance(rotated.matrix(),
                               bloch_projector({-1.0, 0.0, 0.0}).matrix()),
            1e-14);
  EXPECT_THROW(heisenberg_projector(up, ComplexMatrix(3), 1.0), Error);
}

TEST(HistoryProbability, SingleEventIsBornRule) {
  Rng rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2 + trial % 4;
    const HistoryFamily fam = random_family(d, 1, rng);
    for (std::size_t k = 0; k < fam.slots()[0].size(); ++k) {
      const History h(fam, {k});
      const double born =
          trace_of_product(fam.initial_state().matrix(), fam.evolved(0, k)).real();
      EXPECT_NEAR(history_probability_modified(h), born, 1e-12);
      EXPECT_NEAR(history_probability_standard(h), born, 1e-12);
    }
  }
}

TEST(HistoryProbability, UpThenPlusX) {
  const double s = 1.0 / std::numbers::sqrt2;
  const HistoryFamily fam = make_history_family(
      make_density({{1.0, 0.0}, {0.0, 0.0}}), ComplexMatrix(2), {0.0, 1.0},
      {pointer_family(2), two_outcome({s, s})});
  EXPECT_NEAR(history_probability_modified(History(fam, {0, 0})), 0.5, 1e-15);
  EXPECT_NEAR(history_probability_standard(History(fam, {0, 0})), 0.5, 1e-15);
}

TEST(HistoryProbability, NegativeWitness) {
  const HistoryFamily fam = family_108();
  const testing::TwoEventValues oracle = testing::two_event_chain(kPhi108);
  const History h(fam, {0, 0});
  EXPECT_NEAR(history_probability_modified(h), oracle.modified, 1e-14);
  EXPECT_NEAR(history_probability_standard(h), oracle.standard, 1e-14);
  EXPECT_NEAR(oracle.modified,
              0.5 * std::cos(kPhi108) * (std::cos(kPhi108) + std::sin(kPhi108)),
              1e-15);
  EXPECT_NEAR(history_probability_modified(h), -0.09924, 1e-4);
  EXPECT_LT(history_probability_modified(h), 0.0);
  EXPECT_GT(history_probability_standard(h), 0.0);
}

TEST(HistoryProbability, CommutingCaseAgrees) {
  const std::vector<double> d{0.2, 0.3, 0.5};
  const ComplexMatrix h = ComplexMatrix::diagonal(std::vector<double>{1.0, -0.5, 2.0});
  const HistoryFamily fam = make_history_family(
      make_density(ComplexMatrix::diagonal(d)), h, {0.0, 0.7, 1.9},
      {pointer_family(3), pointer_family(3), pointer_family(3)});
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t c = 0; c < 3; ++c) {
        const History hist(fam, {a, b, c});
        EXPECT_NEAR(history_probability_modified(hist),
                    history_probability_standard(hist), 1e-12);
      }
}

TEST(HistoryProbability, MatchesSchroedingerPicture) {
  Rng rng(52);
  for (int trial = 0; trial < 10; ++trial) {
    const HistoryFamily fam = random_family(3, 3, rng);
    std::vector<std::size_t> choice;
    for (const auto& f : fam.slots()) choice.push_back(rng() % f.size());
    EXPECT_NEAR(history_probability_modified(History(fam, choice)),
                schroedinger_chain(fam, choice), 1e-10);
  }
}

TEST(HistoryProbability, BranchesSumToOne) {
  Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const HistoryFamily fam = random_family(2 + trial % 3, 3, rng);
    const ConsistencyReport report = check_consistency(fam, 1e9);
    ASSERT_EQ(report.probability_table.size(), fam.num_branches());
    double total = 0.0;
    for (const auto& [choice, p] : report.probability_table) {
      total += p;
      EXPECT_NEAR(p, history_probability_modified(History(fam, choice)), 1e-13);
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
}

TEST(HistoryProbability, UnitaryCovariance) {
  // Conjugating the state, the Hamiltonian and every projector by one unitary
  // leaves every history probability unchanged.
  Rng rng(54);
  const HistoryFamily fam = random_family(3, 2, rng);
  const ComplexMatrix w = testing::random_unitary(3, rng);
  auto conj = [&](const ComplexMatrix& m) { return w * m * w.adjoint(); };
  std::vector<ProjectorFamily> slots;
  for (const auto& f : fam.slots()) {
    std::vector<Projector> members;
    for (const auto& p : f.members()) members.push_back(make_projector(conj(p.matrix())));
    slots.push_back(make_family(members));
  }
  const HistoryFamily moved = make_history_family(
      make_density(conj(fam.initial_state().matrix()), 0.1),
      conj(fam.hamiltonian()), fam.times(), slots);
  for (std::size_t a = 0; a < fam.slots()[0].size(); ++a)
    for (std::size_t b = 0; b < fam.slots()[1].size(); ++b) {
      EXPECT_NEAR(history_probability_modified(History(fam, {a, b})),
                  history_probability_modified(History(moved, {a, b})), 1e-12);
      EXPECT_NEAR(history_probability_standard(History(fam, {a, b})),
                  history_probability_standard(History(moved, {a, b})), 1e-12);
    }
}

TEST(HistoryProbability, StandardIsNonNegativeOnPositiveStates) {
  Rng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix rho = testing::random_density(3, rng);
    const HistoryFamily fam = random_family(3, 3, rng, &rho);
    const ConsistencyReport report = check_consistency(fam, 1e9);
    for (const auto& [choice, p] : report.probability_table) {
      (void)p;
      EXPECT_GE(history_probability_standard(History(fam, choice)), -1e-12);
    }
  }
}

TEST(History, RejectsBadChoices) {
  const HistoryFamily fam = family_108();
  EXPECT_THROW(History(fam, {0}), Error);
  EXPECT_THROW(History(fam, {0, 2}), Error);
}

TEST(HistoryFamily, RejectsBadGrids) {
  const DensityMatrix up = make_density({{1.0, 0.0}, {0.0, 0.0}});
  try {
    make_history_family(up, ComplexMatrix(2), {1.0, 1.0},
                        {pointer_family(2), pointer_family(2)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
  try {
    make_history_family(up, ComplexMatrix(3), {0.0}, {pointer_family(2)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  try {
    make_history_family(up, ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}, {0.0},
                        {pointer_family(2)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotHermitian);
  }
}

TEST(Consistency, SingleSlotOnPositiveStateIsConsistent) {
  Rng rng(56);
  for (int trial = 0; trial < 30; ++trial) {
    const ComplexMatrix rho = testing::random_density(4, rng);
    const HistoryFamily fam = random_family(4, 1, rng, &rho);
    const ConsistencyReport report = check_consistency(fam);
    EXPECT_TRUE(report.consistent);
    EXPECT_TRUE(report.violations.empty());
  }
}

TEST(Consistency, WitnessFamilyIsFlagged) {
  const ConsistencyReport report = check_consistency(family_108());
  EXPECT_FALSE(report.consistent);
  bool found = false;
  for (const auto& v : report.violations)
    if (v.coarse_graining == "t0:{0} t1:{0}") {
      found = true;
      EXPECT_NEAR(v.probability, testing::two_event_chain(kPhi108).modified, 1e-14);
    }
  EXPECT_TRUE(found);
  // 3 coarse members per slot.
  EXPECT_EQ(report.branches_checked, 9u);
  EXPECT_EQ(report.probability_table.size(), 4u);
}

TEST(Consistency, DecoheredPointerFamilies) {
  const std::vector<double> d{0.36, 0.64};
  const HistoryFamily fam = make_history_family(
      make_density(ComplexMatrix::diagonal(d)), ComplexMatrix(2), {0.0, 1.0},
      {pointer_family(2), pointer_family(2)});
  EXPECT_TRUE(check_consistency(fam).consistent);

  const HistoryFamily nearly = make_history_family(
      make_density({{0.5, 1e-8}, {1e-8, 0.5}}), ComplexMatrix(2), {0.0, 1.0},
      {pointer_family(2), two_outcome({1.0 / std::numbers::sqrt2,
                                       1.0 / std::numbers::sqrt2})});
  EXPECT_TRUE(check_consistency(nearly, 1e-6).consistent);
}

TEST(Consistency, CoarseGrainingsAreExhaustive) {
  Rng rng(57);
  const HistoryFamily fam = random_family(4, 2, rng);
  const ConsistencyReport report = check_consistency(fam, 1e9);
  std::size_t expected = 1;
  for (const auto& f : fam.slots()) expected *= (std::size_t{1} << f.size()) - 1;
  EXPECT_EQ(report.branches_checked, expected);
}

TEST(Consistency, CapIsEnforced) {
  // Two slots of 10 rank-one members: 2^20 > 1e6.
  const std::vector<double> d(10, 0.1);
  const HistoryFamily fam = make_history_family(
      make_density(ComplexMatrix::diagonal(d)), ComplexMatrix(10), {0.0, 1.0},
      {pointer_family(10), pointer_family(10)});
  try {
    check_consistency(fam);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCapExceeded);
  }
}

TEST(Additivity, ResidualsVanish) {
  Rng rng(58);
  for (int trial = 0; trial < 20; ++trial) {
    const HistoryFamily fam = random_family(2 + trial % 3, 2, rng);
    for (std::size_t slot = 0; slot < 2; ++slot)
      EXPECT_LT(additivity_residual(fam, slot, {0, 1}), 1e-10);
  }
  EXPECT_LT(additivity_residual(family_108(), 1, {0, 1}), 1e-12);
  const std::vector<double> d{0.2, 0.3, 0.5};
  const HistoryFamily basis = make_history_family(
      make_density(ComplexMatrix::diagonal(d)), ComplexMatrix(3), {0.0, 1.0},
      {pointer_family(3), pointer_family(3)});
  EXPECT_EQ(additivity_residual(basis, 0, {0, 2}), 0.0);
  EXPECT_THROW(additivity_residual(basis, 0, {1, 1}), Error);
  EXPECT_THROW(additivity_residual(basis, 2, {0, 1}), Error);
}

TEST(Marginalization, ResidualsVanish) {
  Rng rng(59);
  for (int trial = 0; trial < 10; ++trial)
    EXPECT_LT(marginalization_residual(random_family(4, 3, rng)), 1e-10);
  const std::vector<double> d{0.4, 0.6};
  const HistoryFamily pointer = make_history_family(
      make_density(ComplexMatrix::diagonal(d)), pauli_x(), {0.0, 1.0},
      {pointer_family(2), pointer_family(2)});
  EXPECT_LT(marginalization_residual(pointer), 1e-12);
  const HistoryFamily trivial_last = make_history_family(
      make_density(ComplexMatrix::diagonal(d)), pauli_x(), {0.0, 1.0},
      {pointer_family(2), make_family({make_projector(ComplexMatrix::identity(2))})});
  EXPECT_LT(marginalization_residual(trivial_last), 1e-15);
  EXPECT_THROW(marginalization_residual(make_history_family(
                   make_density(ComplexMatrix::diagonal(d)), pauli_x(), {0.0},
                   {pointer_family(2)})),
               Error);
}

}  // namespace
}  // namespace qreduce
