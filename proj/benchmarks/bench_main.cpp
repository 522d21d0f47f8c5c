// Microbenchmarks for the hot paths: bound evaluation on both of its
// internal routes, propagator construction, one full verification trial,
// and an exact nested switching integral.

#include <benchmark/benchmark.h>

#include "uddlab/bath.hpp"
#include "uddlab/bounds.hpp"
#include "uddlab/dyson.hpp"
#include "uddlab/sequence.hpp"
#include "uddlab/simulator.hpp"

namespace {

using namespace uddlab;

void BM_DeltaClosedForm(benchmark::State& state) {
  // Moderate arguments keep the closed form numerically safe.
  const BoundParams params{4, 1.0, 0.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(delta_eval(params));
  }
}
BENCHMARK(BM_DeltaClosedForm);

void BM_DeltaTailSeries(benchmark::State& state) {
  // Small epsilon forces the direct tail sum (the closed form cancels).
  const BoundParams params{10, 1.0, 1e-3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(delta_eval(params));
  }
}
BENCHMARK(BM_DeltaTailSeries);

void BM_TogglingPropagator(benchmark::State& state) {
  const auto dim = static_cast<Eigen::Index>(state.range(0));
  const BathModel bath = random_bath(dim, 1.0, 1.0, 42);
  const PulseSequence seq = udd_sequence(10, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(toggling_propagator(bath, seq));
  }
}
BENCHMARK(BM_TogglingPropagator)->Arg(4)->Arg(8)->Arg(16);

void BM_VerifyBoundTrial(benchmark::State& state) {
  ExperimentSpec spec;
  spec.bath_dim = 4;
  spec.n_pulses = 4;
  spec.eta = 1.0;
  spec.epsilon = 0.1;
  spec.trials = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_bound(spec, 1));
    spec.seed += 1;  // fresh draw each iteration
  }
}
BENCHMARK(BM_VerifyBoundTrial);

void BM_NestedIntegralExact(benchmark::State& state) {
  const SequenceTiming timing = udd_timing(5);
  const AlphaWord word = make_word("z0z0z");
  for (auto _ : state) {
    benchmark::DoNotOptimize(f_alpha_exact(word, timing));
  }
}
BENCHMARK(BM_NestedIntegralExact);

}  // namespace

BENCHMARK_MAIN();
