#include <benchmark/benchmark.h>

#include <ginv/blocks.hpp>
#include <ginv/harness.hpp>
#include <ginv/search.hpp>

using namespace ginv;

static void AhPipeline(benchmark::State& state) {
    GenSpec spec;
    spec.m = state.range(0);
    spec.n = state.range(0) / 10;
    spec.r = state.range(0) / 100;
    spec.seed = 7;
    const Matrix A = gen_instance(spec);
    for (auto _ : state) {
        GinvResult res = ah_symmetric_ginv(A, SearchConfig{});
        benchmark::DoNotOptimize(res.one_norm);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(AhPipeline)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond)->Complexity();

static void SymPipeline(benchmark::State& state) {
    GenSpec spec;
    spec.m = state.range(0);
    spec.n = state.range(0);
    spec.r = state.range(0) / 8;
    spec.seed = 11;
    const Matrix A = gen_instance_symmetric(spec);
    for (auto _ : state) {
        GinvResult res = sym_reflexive_ginv(A, SearchConfig{});
        benchmark::DoNotOptimize(res.one_norm);
    }
}
BENCHMARK(SymPipeline)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void ColumnBlockOnly(benchmark::State& state) {
    GenSpec spec;
    spec.m = state.range(0);
    spec.n = state.range(0) / 10;
    spec.r = state.range(0) / 100;
    spec.seed = 13;
    const Matrix A = gen_instance(spec);
    auto [S, T] = init_general(A);
    for (auto _ : state) {
        GinvResult res = column_block(A, T);
        benchmark::DoNotOptimize(res.one_norm);
    }
}
BENCHMARK(ColumnBlockOnly)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);
