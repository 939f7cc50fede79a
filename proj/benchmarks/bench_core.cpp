#include <benchmark/benchmark.h>

#include <random>

#include "sfd/specfun.hpp"
#include "sfd/stochastic.hpp"
#include "sfd/synthesis.hpp"

namespace {

const sfd::FractionalModel kModel{0.5, 1e-5, sfd::AlgebraicSpectrum{1, 1, 2.3}, sfd::AlgebraicSpectrum{1, 1, 2.5}};

// x picks the evaluation route: 0.5 series, 4 integral, 50 asymptotic (alpha = 1/2).
void BM_mlNeg(benchmark::State& state) {
    const double x = static_cast<double>(state.range(0)) / 10.0;
    for (auto _ : state) benchmark::DoNotOptimize(sfd::mlNeg(0.5, x));
}
BENCHMARK(BM_mlNeg)->Arg(5)->Arg(40)->Arg(500);

void BM_sigmaSquaredUncached(benchmark::State& state) {
    const int ell = static_cast<int>(state.range(0));
    for (auto _ : state) {
        sfd::clearSigmaCache();
        benchmark::DoNotOptimize(sfd::sigmaSquared(ell, 9e-5, 0.5));
    }
}
BENCHMARK(BM_sigmaSquaredUncached)->Arg(10)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_sampleCombined(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    sfd::sampleCombined(kModel, L, 1e-4, sfd::RngStream(1, 0));  // fill the caches
    std::uint32_t j = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sfd::sampleCombined(kModel, L, 1e-4, sfd::RngStream(1, j++)));
}
BENCHMARK(BM_sampleCombined)->Arg(100)->Arg(400)->Unit(benchmark::kMicrosecond);

void BM_synthesize(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    const int nLon = static_cast<int>(state.range(1));
    std::mt19937_64 gen(7);
    std::normal_distribution<double> n01;
    sfd::CoefficientSet c(L);
    for (auto& v : c.values()) v = {n01(gen), n01(gen)};
    const sfd::GridSpec g = sfd::GridSpec::equiangular(L + 1, nLon);
    for (auto _ : state) benchmark::DoNotOptimize(sfd::synthesize(c, g));
}
// 2L+2 longitudes takes the direct sum, 4L rounded up to a power of two the FFT.
BENCHMARK(BM_synthesize)->Args({64, 130})->Args({64, 256})->Args({256, 1024})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
