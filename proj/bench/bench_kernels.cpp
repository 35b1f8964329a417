// Serial reference versus OpenMP for the data-parallel kernels.

#include "splitinf/fisher.hpp"
#include "splitinf/kernels.hpp"
#include "splitinf/linmodel.hpp"
#include "splitinf/select.hpp"
#include "splitinf/simlab/replicate.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace splitinf;

void BM_PairwiseSerial(benchmark::State& state) {
  Rng rng = make_stream(1);
  const Matrix X = gen_design(state.range(0), 30, 0.5, rng);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::pairwise_sq_distances_serial(X));
}

void BM_PairwiseParallel(benchmark::State& state) {
  Rng rng = make_stream(1);
  const Matrix X = gen_design(state.range(0), 30, 0.5, rng);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::pairwise_sq_distances(X));
}

BENCHMARK(BM_PairwiseSerial)->Arg(200)->Arg(800);
BENCHMARK(BM_PairwiseParallel)->Arg(200)->Arg(800);

// One replication: a 200 x 30 dataset and an OLS fit.
double ols_replication(Rng& rng) {
  const Matrix X = gen_design(200, 30, 0.0, rng);
  const Vector y = X.col(0) + standard_normal(200, rng);
  return ols_fit(X, y).sigma2_hat;
}

void BM_ReplicationsSerial(benchmark::State& state) {
  const simlab::ReplicationPlan plan{7, 1, 0, 50};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simlab::run_replications_serial<double>(state.range(0), plan, ols_replication));
  }
}

void BM_ReplicationsParallel(benchmark::State& state) {
  const simlab::ReplicationPlan plan{7, 1, 0, 50};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simlab::run_replications<double>(state.range(0), plan, ols_replication));
  }
}

BENCHMARK(BM_ReplicationsSerial)->Arg(64);
BENCHMARK(BM_ReplicationsParallel)->Arg(64);

struct StabilityData {
  Matrix X;
  Vector y;
  StabilityData() {
    Rng rng = make_stream(3);
    X = gen_design(200, 400, 0.0, rng);
    y = X.leftCols(10).rowwise().sum() + standard_normal(200, rng);
  }
};

void BM_StabilitySerial(benchmark::State& state) {
  static const StabilityData d;
  for (auto _ : state) {
    Rng rng = make_stream(4);
    benchmark::DoNotOptimize(stability_frequencies_serial(d.X, d.y, 21, 50, rng));
  }
}

void BM_StabilityParallel(benchmark::State& state) {
  static const StabilityData d;
  for (auto _ : state) {
    Rng rng = make_stream(4);
    benchmark::DoNotOptimize(stability_frequencies(d.X, d.y, 21, 50, rng));
  }
}

BENCHMARK(BM_StabilitySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StabilityParallel)->Unit(benchmark::kMillisecond);

void BM_Prop1Serial(benchmark::State& state) {
  Rng rng = make_stream(5);
  const Matrix X = gen_design(40, 3, 0.0, rng);
  const ConstantInclusionStrategy st{SplitStrategy::simple, {}, {}, 1};
  for (auto _ : state) {
    Rng draws = make_stream(6);
    benchmark::DoNotOptimize(
        verify_proposition1_serial(X, st, 0.5, PhiCriterion::max_eigenvalue(), 2000, draws));
  }
}

void BM_Prop1Parallel(benchmark::State& state) {
  Rng rng = make_stream(5);
  const Matrix X = gen_design(40, 3, 0.0, rng);
  const ConstantInclusionStrategy st{SplitStrategy::simple, {}, {}, 1};
  for (auto _ : state) {
    Rng draws = make_stream(6);
    benchmark::DoNotOptimize(
        verify_proposition1(X, st, 0.5, PhiCriterion::max_eigenvalue(), 2000, draws));
  }
}

BENCHMARK(BM_Prop1Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Prop1Parallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
