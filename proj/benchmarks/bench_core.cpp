#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "nflab/attractor.hpp"
#include "nflab/equilibria.hpp"

using namespace nflab;

namespace {

FlowParams params(std::size_t n) {
    return FlowParams(0.5, FiringRate(), make_kernel(KernelProfile::bump(), CircleGrid(1.2, n)));
}

GridFunction state(const CircleGrid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_state(g, 3.0, rng);
}

void BM_Convolve(benchmark::State& st) {
    const auto p = params(static_cast<std::size_t>(st.range(0)));
    const auto u = state(p.grid(), 1);
    for (auto _ : st) benchmark::DoNotOptimize(convolve(p.kernel(), u));
}
BENCHMARK(BM_Convolve)->RangeMultiplier(4)->Range(64, 4096);

void BM_ConvolveDirect(benchmark::State& st) {
    const auto p = params(static_cast<std::size_t>(st.range(0)));
    const auto u = state(p.grid(), 1);
    for (auto _ : st) benchmark::DoNotOptimize(convolve_direct(p.kernel(), u));
}
BENCHMARK(BM_ConvolveDirect)->RangeMultiplier(4)->Range(64, 1024);

void BM_Step(benchmark::State& st) {
    const auto integ = st.range(1) == 0 ? Integrator::etd1 : Integrator::rk4;
    const auto p = params(static_cast<std::size_t>(st.range(0))).with_dt(0.05, integ);
    auto u = state(p.grid(), 2);
    for (auto _ : st) {
        u = step(p, u);
        benchmark::DoNotOptimize(u);
    }
}
BENCHMARK(BM_Step)->ArgsProduct({{256, 1024}, {0, 1}});

void BM_Spectrum(benchmark::State& st) {
    const auto p = params(static_cast<std::size_t>(st.range(0)));
    const auto u = state(p.grid(), 3);
    for (auto _ : st) benchmark::DoNotOptimize(spectrum(p, u));
}
BENCHMARK(BM_Spectrum)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Semidistance(benchmark::State& st) {
    const CircleGrid g(1.2, 256);
    std::mt19937_64 rng(4);
    std::vector<GridFunction> A, B;
    for (int i = 0; i < st.range(0); ++i) A.push_back(random_state(g, 3.0, rng));
    for (int i = 0; i < st.range(0); ++i) B.push_back(random_state(g, 3.0, rng));
    const bool brute = st.range(1) != 0;
    for (auto _ : st) benchmark::DoNotOptimize(brute ? semidistance_brute(A, B) : semidistance(A, B));
}
BENCHMARK(BM_Semidistance)->ArgsProduct({{256, 1024}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
