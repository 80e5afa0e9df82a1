// Microbenchmarks for the hot paths: superoperator assembly, generator
// application (matrix-free and sparse), steady-state solves, and integration
// throughput across network sizes.

#include <benchmark/benchmark.h>

#include "bosonet/dynamics.hpp"
#include "bosonet/liouvillian.hpp"

using namespace bosonet;

namespace {

GeneratorSpec generator_for(int n) {
    return n == 2 ? bell_generator(50.0) : w_generator(n, 50.0, 50.0);
}

}  // namespace

static void BM_AssembleSuperoperator(benchmark::State& state) {
    GeneratorSpec gen = generator_for(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        Liouvillian liou(gen);
        benchmark::DoNotOptimize(liou.matrix().nonZeros());
    }
}
BENCHMARK(BM_AssembleSuperoperator)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMicrosecond);

static void BM_ApplyMatrixFree(benchmark::State& state) {
    Liouvillian liou(generator_for(static_cast<int>(state.range(0))));
    DensityOperator rho = thermal_state(liou.space(), 0.05);
    for (auto _ : state) {
        benchmark::DoNotOptimize(liou.apply(rho.matrix).sum());
    }
}
BENCHMARK(BM_ApplyMatrixFree)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMicrosecond);

static void BM_ApplySparseMatvec(benchmark::State& state) {
    Liouvillian liou(generator_for(static_cast<int>(state.range(0))));
    const SparseC& matrix = liou.matrix();
    DensityOperator rho = thermal_state(liou.space(), 0.05);
    Eigen::VectorXcd vec =
        Eigen::Map<const Eigen::VectorXcd>(rho.matrix.data(), liou.super_dim());
    Eigen::VectorXcd out(liou.super_dim());
    for (auto _ : state) {
        out.noalias() = matrix * vec;
        benchmark::DoNotOptimize(out.sum());
    }
}
BENCHMARK(BM_ApplySparseMatvec)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMicrosecond);

static void BM_EvolveBellUnit(benchmark::State& state) {
    Liouvillian liou(bell_generator(50.0));
    DensityOperator rho0 = thermal_state(liou.space(), 0.05);
    EvolveOptions opts;
    opts.t_final = 1.0;
    opts.dt = 2e-4;
    opts.max_outputs = 2;
    for (auto _ : state) {
        Trajectory traj = evolve(liou, rho0, opts);
        benchmark::DoNotOptimize(traj.purity.back());
    }
}
BENCHMARK(BM_EvolveBellUnit)->Unit(benchmark::kMillisecond);

static void BM_SteadyStateDirect(benchmark::State& state) {
    Liouvillian liou(generator_for(static_cast<int>(state.range(0))));
    for (auto _ : state) {
        SteadyStateResult result = steady_state(liou);
        benchmark::DoNotOptimize(result.residual);
    }
}
BENCHMARK(BM_SteadyStateDirect)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
