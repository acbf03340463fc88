#include <benchmark/benchmark.h>

#include "resinv/bounds.hpp"
#include "resinv/jost.hpp"
#include "resinv/kernels.hpp"
#include "resinv/potential.hpp"
#include "resinv/resonances.hpp"

#include <complex>

namespace {

resinv::Potential bump_pair_q2(int n) {
    return resinv::make_family("sine(0.3,1)+bump(0.4,0.5,0.25)", 1.0, n);
}

void BM_KernelSolve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const resinv::Potential q1 = resinv::make_family("sine(0.3,1)", 1.0, n);
    const resinv::Potential q2 = bump_pair_q2(n);
    for (auto _ : state) benchmark::DoNotOptimize(resinv::solve_K12(q1, q2));
    state.SetComplexityN(n);
}
BENCHMARK(BM_KernelSolve)->Arg(64)->Arg(128)->Arg(256)->Arg(512)->Complexity();

void BM_JostKernelRoute(benchmark::State& state) {
    const resinv::JostEvaluator ev(bump_pair_q2(512));
    const std::complex<double> z{static_cast<double>(state.range(0)), -3.0};
    for (auto _ : state) benchmark::DoNotOptimize(ev.psi(z, resinv::JostRoute::kernel));
}
BENCHMARK(BM_JostKernelRoute)->Arg(2)->Arg(10)->Arg(30);

void BM_JostOdeRoute(benchmark::State& state) {
    const resinv::JostEvaluator ev(bump_pair_q2(512));
    const std::complex<double> z{static_cast<double>(state.range(0)), -3.0};
    for (auto _ : state) benchmark::DoNotOptimize(ev.psi(z, resinv::JostRoute::ode));
}
BENCHMARK(BM_JostOdeRoute)->Arg(2)->Arg(10)->Arg(30);

void BM_ZeroCount(benchmark::State& state) {
    const resinv::JostEvaluator ev(bump_pair_q2(256));
    const double R = static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(resinv::count_zeros(ev, std::complex<double>(0.0), R));
}
BENCHMARK(BM_ZeroCount)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_GrowthFactor(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(resinv::phi_alpha(20.0, 1e-6, 0.675, 1.0));
}
BENCHMARK(BM_GrowthFactor);

void BM_PointwiseBound(benchmark::State& state) {
    resinv::AprioriParams ap;
    ap.Q1 = 1.0;
    ap.p = resinv::Lp::finite(2.0);
    ap.Dp = 1.0;
    ap.delta = 0.1;
    ap.r = resinv::Lp::finite(2.0);
    ap.Dr_prime = 1.0;
    ap.A_inf = 2.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(resinv::pointwise_stability_bound(25.0, 1e-6, ap).total());
}
BENCHMARK(BM_PointwiseBound);

} // namespace

BENCHMARK_MAIN();
