#include <benchmark/benchmark.h>

#include "finqm/finqm.hpp"

using namespace finqm;

static void BM_ExactBasisIdentity(benchmark::State& st) {
    const long N = st.range(0);
    const ModulePtr M = build_module(WeylDesc(Rat(1), rat(1, N)));
    const auto ub = u_basis(M), vb = v_basis(M);
    for (auto _ : st)
        for (long k = 0; k < N; ++k) benchmark::DoNotOptimize(inner(ub[k], vb[(k * 7) % N]));
}
BENCHMARK(BM_ExactBasisIdentity)->Arg(16)->Arg(64);

static void BM_GaussSum(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(gauss_sum(st.range(0)));
}
BENCHMARK(BM_GaussSum)->Arg(64)->Arg(1024);

static void BM_FreePropagatorGrid(benchmark::State& st) {
    const ScaleParams P(Rat(1), st.range(0));
    for (auto _ : st)
        for (double x1 : {-1.0, -0.5, 0.0, 0.5, 1.0})
            for (double x2 : {-1.0, -0.5, 0.0, 0.5, 1.0}) benchmark::DoNotOptimize(free_propagator(x1, x2, rat(1, 2), P));
}
BENCHMARK(BM_FreePropagatorGrid)->Arg(2520)->Arg(5040);

static void BM_QhoTrace(benchmark::State& st) {
    const ScaleParams P(Rat(1), 30 * st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(qho_trace(3, 4, 5, P));
}
BENCHMARK(BM_QhoTrace)->Arg(1)->Arg(4)->Arg(16);

static void BM_CcrResidual(benchmark::State& st) {
    const ScaleParams P(Rat(1), st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(ccr_residual(CcrKind::Position, P));
}
BENCHMARK(BM_CcrResidual)->Arg(60)->Arg(480);

static void BM_WeakRing(benchmark::State& st) {
    const ScaleParams P(Rat(1), 10000);
    for (auto _ : st) benchmark::DoNotOptimize(weak_ring_samples(P, st.range(0), 8, 1));
}
BENCHMARK(BM_WeakRing)->Arg(1000)->Arg(10000);

static void BM_ComposeChain(benchmark::State& st) {
    const ModulePtr M = build_module(WeylDesc(Rat(1), rat(1, st.range(0))));
    for (auto _ : st) {
        const RegUnitary F = fourier(M);
        const RegUnitary G = gaussian(F.dst, 1, 1);
        benchmark::DoNotOptimize(compose(G, F));
    }
}
BENCHMARK(BM_ComposeChain)->Arg(24)->Arg(96);

BENCHMARK_MAIN();
