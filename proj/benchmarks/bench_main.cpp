#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "emdsel/emd.hpp"
#include "emdsel/hb_process.hpp"
#include "emdsel/ppf.hpp"
#include "emdsel/special_functions.hpp"

using namespace emdsel;

namespace {

HbParams bench_params(double c) {
    std::vector<double> q(1025), d(1025);
    for (int j = 0; j <= 1024; ++j) {
        const double phi = j / 1024.0;
        q[j] = phi * phi * 5.0 - 2.0;
        d[j] = 0.1 + 0.3 * phi * (1.0 - phi);
    }
    return {EmpiricalPpf(1024, q), DiscrepancyFn(1024, d), c, 8};
}

void BM_Digamma(benchmark::State& state) {
    double x = 0.37;
    for (auto _ : state) {
        benchmark::DoNotOptimize(digamma(x));
        x += 1e-9;
    }
}
BENCHMARK(BM_Digamma);

void BM_SolveAlphaBeta(benchmark::State& state) {
    double r = 2.7;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_alpha_beta(r, 0.42));
        r = r < 100.0 ? r * 1.0001 : 2.7;
    }
}
BENCHMARK(BM_SolveAlphaBeta);

void BM_HbProcessSetup(benchmark::State& state) {
    const HbParams params = bench_params(0.5);
    for (auto _ : state) {
        HbProcess process(params);
        benchmark::DoNotOptimize(process);
    }
}
BENCHMARK(BM_HbProcessSetup);

void BM_SampleRealization(benchmark::State& state) {
    const HbProcess process(bench_params(0.5));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(process.sample(seed++));
    }
}
BENCHMARK(BM_SampleRealization);

void BM_BuildPpf(benchmark::State& state) {
    std::mt19937_64 gen(1);
    std::vector<double> values(4096);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (auto& v : values) v = dist(gen);
    const LossSamples losses(values);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_empirical_ppf(losses, 1024));
    }
}
BENCHMARK(BM_BuildPpf);

void BM_BemdSortMerge(benchmark::State& state) {
    std::mt19937_64 gen(2);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> a(state.range(0)), b(state.range(0));
    for (auto& x : a) x = dist(gen);
    for (auto& x : b) x = dist(gen) + 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bemd(a, b));
    }
}
BENCHMARK(BM_BemdSortMerge)->Arg(256)->Arg(4096);

}  // namespace

int main(int argc, char* argv[]) {
    benchmark::Initialize(&argc, argv);
    benchmark::RunSpecifiedBenchmarks();
}
