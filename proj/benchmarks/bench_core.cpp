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
#include <benchmark/benchmark.h>

#include <random>

#include "qreduce/decoherence.hpp"
#include "qreduce/histories.hpp"
#include "qreduce/matrix.hpp"
#include "qreduce/reduction.hpp"

namespace {

using namespace qreduce;

ComplexMatrix random_hermitian(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ComplexMatrix m(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = {normal(rng), normal(rng)};
  return m.hermitian_part();
}

void BM_HermitianEigensystem(benchmark::State& state) {
  const ComplexMatrix h = random_hermitian(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigensystem(h));
}
BENCHMARK(BM_HermitianEigensystem)->RangeMultiplier(2)->Range(2, 32);

void BM_UnitaryExp(benchmark::State& state) {
  const ComplexMatrix h = random_hermitian(static_cast<std::size_t>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(unitary_exp(h, 0.7));
}
BENCHMARK(BM_UnitaryExp)->RangeMultiplier(2)->Range(2, 32);

void BM_ReduceLambda(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  ComplexMatrix m = random_hermitian(d, 9);
  m = m * m;
  m *= 1.0 / m.trace().real();
  const DensityMatrix rho = make_density(m);
  const ProjectorFamily family = pointer_family(d);
  for (auto _ : state)
    benchmark::DoNotOptimize(unread_mixture_lambda(rho, family, 1.0));
}
BENCHMARK(BM_ReduceLambda)->RangeMultiplier(2)->Range(2, 16);

void BM_EvolveAndTrace(benchmark::State& state) {
  const Complex h{0.7071067811865476, 0.0};
  const BitByBitModel model =
      random_model(h, h, static_cast<std::size_t>(state.range(0)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(evolve_and_trace(model, 1.0));
}
BENCHMARK(BM_EvolveAndTrace)->DenseRange(2, 14, 4);

void BM_SuppressionSweep(benchmark::State& state) {
  const Complex h{0.7071067811865476, 0.0};
  const BitByBitModel base{h, h, {}, {}, 20260101};
  std::vector<std::size_t> ns;
  for (std::size_t n = 2; n <= 12; ++n) ns.push_back(n);
  for (auto _ : state)
    benchmark::DoNotOptimize(suppression_sweep(base, ns, 1.0, 200));
}
BENCHMARK(BM_SuppressionSweep)->Unit(benchmark::kMillisecond);

void BM_CheckConsistency(benchmark::State& state) {
  // Slots of d rank-one pointer projectors under a random Hamiltonian.
  const auto d = static_cast<std::size_t>(state.range(0));
  const std::vector<double> diag(d, 1.0 / static_cast<double>(d));
  const HistoryFamily family = make_history_family(
      make_density(ComplexMatrix::diagonal(diag)), random_hermitian(d, 12),
      {0.0, 0.5, 1.0}, {pointer_family(d), pointer_family(d), pointer_family(d)});
  for (auto _ : state) benchmark::DoNotOptimize(check_consistency(family));
}
BENCHMARK(BM_CheckConsistency)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
