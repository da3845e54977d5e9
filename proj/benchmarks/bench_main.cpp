#include "dynprice/antitonic.hpp"
#include "dynprice/market.hpp"
#include "dynprice/policy.hpp"
#include "dynprice/rng.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

std::vector<dynprice::WeightedSample> noisy_decreasing(std::size_t n) {
    dynprice::Rng rng(7, n);
    std::vector<dynprice::WeightedSample> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(n);
        s[i] = {u, rng.uniform01() < 1.0 - u ? 1.0 : 0.0, 1.0};
    }
    return s;
}

void BM_FitPava(benchmark::State& state) {
    const auto samples = noisy_decreasing(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto levels = dynprice::fit_pava_levels(samples);
        benchmark::DoNotOptimize(levels.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FitPava)->RangeMultiplier(4)->Range(1 << 10, 1 << 20)->Complexity(benchmark::oN);

void BM_OraclePrice(benchmark::State& state) {
    const auto noise = dynprice::NoiseModel::trunc_gaussian(0.0, 1.0);
    double offset = 2.0;
    for (auto _ : state) {
        auto choice = dynprice::oracle_price(noise, offset, 0.0, 5.0);
        benchmark::DoNotOptimize(choice);
        offset = offset > 4.0 ? 2.0 : offset + 0.01;
    }
}
BENCHMARK(BM_OraclePrice);

void BM_MaximizeStepRevenue(benchmark::State& state) {
    const auto samples = noisy_decreasing(static_cast<std::size_t>(state.range(0)));
    std::vector<double> u(samples.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = samples[i].u - 0.5;
    const dynprice::StepFunction s(u, dynprice::fit_pava_levels(samples));
    for (auto _ : state) {
        auto choice = dynprice::maximize_step_revenue(s, 3.0, 0.0, 5.0);
        benchmark::DoNotOptimize(choice);
    }
}
BENCHMARK(BM_MaximizeStepRevenue)->Arg(64)->Arg(1024);

}  // namespace
BENCHMARK_MAIN();
