#include <benchmark/benchmark.h>

#include "vacancy/coverage.hpp"
#include "vacancy/estimators.hpp"
#include "vacancy/measure.hpp"
#include "vacancy/soup.hpp"

using namespace vacancy;

namespace {

SoupSample sample_for(int d, int n, double lambda, std::uint64_t seed) {
    const auto spec = IntensitySpec::make(ModelKind::Box, d, lambda);
    return sample_soup(spec, Window::unit(d), n, seed);
}

void BM_sample_soup(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto spec = IntensitySpec::make(ModelKind::Box, 1, 1.0);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_soup(spec, Window::unit(1), n, seed++));
    }
}
BENCHMARK(BM_sample_soup)->Arg(64)->Arg(256)->Arg(1024);

void BM_untouched_boxes(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SoupSample s = sample_for(1, n, 1.0, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(untouched_boxes(s, n));
    }
}
BENCHMARK(BM_untouched_boxes)->Arg(64)->Arg(256)->Arg(1024);

void BM_covering_bounds(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SoupSample s = sample_for(1, n, 1.0, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(covering_number_bounds(s, n, 10));
    }
}
BENCHMARK(BM_covering_bounds)->Arg(64)->Arg(256)->Arg(1024);

void BM_covering_bounds_2d(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SoupSample s = sample_for(2, n, 2.0, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(covering_number_bounds(s, n, 10));
    }
}
BENCHMARK(BM_covering_bounds_2d)->Arg(16)->Arg(64);

void BM_second_moment(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto spec = IntensitySpec::make(ModelKind::Box, 1, 0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_second_moment_mn(spec, n));
    }
}
BENCHMARK(BM_second_moment)->Arg(64)->Arg(256);

void BM_be_classify_log(benchmark::State& state) {
    const RadiusLaw law = RadiusLaw::log_perturbed(2, +1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(be_classify(law, 0.6366, 2));
    }
}
BENCHMARK(BM_be_classify_log);

} // namespace

BENCHMARK_MAIN();
