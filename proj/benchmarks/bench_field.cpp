#include <benchmark/benchmark.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "efnet/field.hpp"

namespace {

efnet::BinaryImage image_with(int white, std::uint64_t seed) {
    std::vector<std::uint16_t> all(efnet::kPixels);
    std::iota(all.begin(), all.end(), std::uint16_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(static_cast<std::size_t>(white));
    return efnet::BinaryImage::from_indices(all);
}

// Typical binarized digits light 100-200 pixels.
void BM_PotentialNaive(benchmark::State& state) {
    const auto img = image_with(static_cast<int>(state.range(0)), 1);
    const efnet::PhysicalConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(efnet::potential_table(img, cfg));
}
BENCHMARK(BM_PotentialNaive)->Arg(50)->Arg(150)->Arg(400);

void BM_PotentialKernel(benchmark::State& state) {
    const auto img = image_with(static_cast<int>(state.range(0)), 1);
    const auto kernel = efnet::build_kernel(efnet::PhysicalConfig{});
    for (auto _ : state) benchmark::DoNotOptimize(efnet::potential_table_fast(img, kernel));
}
BENCHMARK(BM_PotentialKernel)->Arg(50)->Arg(150)->Arg(400);

void BM_BuildKernel(benchmark::State& state) {
    const efnet::PhysicalConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(efnet::build_kernel(cfg));
}
BENCHMARK(BM_BuildKernel);

}  // namespace
