#include <benchmark/benchmark.h>

#include "onecomp/boundary_criterion.hpp"
#include "onecomp/sublevel.hpp"

namespace {

using namespace onecomp;

void BM_EvalLogModulusGeometric(benchmark::State& state) {
    const InnerSpec u = InnerSpec::infinite_blaschke(ZeroSequence::geometric(64));
    const Complex z(0.9, 0.05);
    for (auto _ : state)
        benchmark::DoNotOptimize(eval_log_modulus(u, z, 0.01).value);
}
BENCHMARK(BM_EvalLogModulusGeometric);

void BM_EvalLogModulusAtomic(benchmark::State& state) {
    const InnerSpec u = InnerSpec::atomic_s();
    const Complex z(0.9, 0.05);
    for (auto _ : state)
        benchmark::DoNotOptimize(eval_log_modulus(u, z, 0.01).value);
}
BENCHMARK(BM_EvalLogModulusAtomic);

void BM_ClassifyCells(benchmark::State& state) {
    const InnerSpec u = InnerSpec::atomic_s();
    const DiskGrid grid(0.99, 0.3);
    GridPolicy policy;
    policy.workers = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(classify_cells(u, 0.5, grid, policy));
    state.SetItemsProcessed(state.iterations() * grid.cells());
}
BENCHMARK(BM_ClassifyCells);

void BM_BoundaryJet(benchmark::State& state) {
    const InnerSpec u =
        compose(InnerSpec::atomic_s(),
                InnerSpec::finite_blaschke({Complex(0, 0), Complex(0, 0)}));
    const BoundaryPoint zeta = BoundaryPoint::from_angle(2.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(boundary_derivatives(u, zeta));
}
BENCHMARK(BM_BoundaryJet);

void BM_PairRhoParabolic(benchmark::State& state) {
    const ZeroSequence seq = ZeroSequence::parabolic_orbit(10000);
    long n = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(seq.pair_rho(n, n + 1));
        n = n % 9000 + 1;
    }
}
BENCHMARK(BM_PairRhoParabolic);

}  // namespace

BENCHMARK_MAIN();
