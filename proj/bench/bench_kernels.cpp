// Serial reference kernels against their OpenMP counterparts, plus whole
// experiment throughput.

#include <benchmark/benchmark.h>

#include <vector>

#include "mqsr/harness/experiment.hpp"
#include "mqsr/qsim/kernels.hpp"
#include "mqsr/qsim/operations.hpp"

namespace {

using namespace mqsr;
using namespace mqsr::qsim;

std::vector<Complex> random_amps(int n) {
  Rng rng(42);
  const auto s = random_state(n, rng);
  return {s.amplitudes().begin(), s.amplitudes().end()};
}

const kernels::Matrix2 kHadamard{Complex(0.7071067811865476), Complex(0.7071067811865476),
                                 Complex(0.7071067811865476), Complex(-0.7071067811865476)};

template <auto Fn>
void BM_ApplyMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto amps = random_amps(n);
  for (auto _ : state) {
    for (int q = 0; q < n; ++q) Fn(amps, n, q, kHadamard);
    benchmark::DoNotOptimize(amps.data());
  }
  state.SetItemsProcessed(state.iterations() * n * static_cast<std::int64_t>(amps.size()));
}

template <auto Fn>
void BM_Cnot(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto amps = random_amps(n);
  for (auto _ : state) {
    for (int q = 0; q + 1 < n; ++q) Fn(amps, n, q, q + 1);
    benchmark::DoNotOptimize(amps.data());
  }
}

template <auto Fn>
void BM_BellWeights(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto amps = random_amps(n);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(amps, n, 0, n - 1));
}

void BM_Experiment(benchmark::State& state) {
  harness::ExperimentSpec spec;
  spec.base.key_len = 32;
  spec.grid = {adversary::StrategyDescriptor::none(), adversary::StrategyDescriptor::dishonest_agent(0, 1)};
  spec.trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(harness::run_experiment(spec).rows.size());
}

}  // namespace

BENCHMARK_TEMPLATE(BM_ApplyMatrix, kernels::serial::apply_matrix)->DenseRange(10, 16, 2);
BENCHMARK_TEMPLATE(BM_ApplyMatrix, kernels::parallel::apply_matrix)->DenseRange(10, 16, 2);
BENCHMARK_TEMPLATE(BM_Cnot, kernels::serial::apply_cnot)->DenseRange(10, 16, 2);
BENCHMARK_TEMPLATE(BM_Cnot, kernels::parallel::apply_cnot)->DenseRange(10, 16, 2);
BENCHMARK_TEMPLATE(BM_BellWeights, kernels::serial::bell_weights)->DenseRange(10, 16, 2);
BENCHMARK_TEMPLATE(BM_BellWeights, kernels::parallel::bell_weights)->DenseRange(10, 16, 2);
BENCHMARK(BM_Experiment)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
