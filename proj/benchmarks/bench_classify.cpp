#include <benchmark/benchmark.h>

#include <random>

#include "efnet/metric_net.hpp"

namespace {

std::vector<efnet::BinaryImage> random_images(int n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution white(p);
    std::vector<efnet::BinaryImage> out;
    for (int i = 0; i < n; ++i) {
        std::vector<std::uint16_t> active;
        for (std::uint16_t px = 0; px < efnet::kPixels; ++px)
            if (white(rng)) active.push_back(px);
        out.push_back(efnet::BinaryImage::from_indices(active));
    }
    return out;
}

efnet::Network network_of(int refs) {
    const auto imgs = random_images(refs, 0.19, 7);
    std::vector<efnet::Reference> r;
    for (int k = 0; k < refs; ++k) r.push_back({k * efnet::kDigits / refs, imgs[static_cast<std::size_t>(k)], k});
    return efnet::build_network(r, efnet::PhysicalConfig{});
}

void BM_BuildNetwork(benchmark::State& state) {
    const auto imgs = random_images(static_cast<int>(state.range(0)), 0.19, 7);
    std::vector<efnet::Reference> r;
    for (std::size_t k = 0; k < imgs.size(); ++k) r.push_back({static_cast<int>(k % 10), imgs[k], -1});
    for (auto _ : state) benchmark::DoNotOptimize(efnet::build_network(r, efnet::PhysicalConfig{}));
}
BENCHMARK(BM_BuildNetwork)->Arg(30)->Arg(70)->Unit(benchmark::kMillisecond);

void BM_ClassifyReference(benchmark::State& state) {
    const auto net = network_of(static_cast<int>(state.range(0)));
    const auto inputs = random_images(64, 0.19, 9);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(efnet::classify(net, inputs[i++ % inputs.size()]));
}
BENCHMARK(BM_ClassifyReference)->Arg(30)->Arg(70);

void BM_ClassifyBatch(benchmark::State& state) {
    const auto net = network_of(static_cast<int>(state.range(0)));
    const efnet::BatchClassifier engine(net);
    const auto inputs = random_images(64, 0.19, 9);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(engine.classify(inputs[i++ % inputs.size()], efnet::Mode::Strict));
}
BENCHMARK(BM_ClassifyBatch)->Arg(30)->Arg(70);

}  // namespace

BENCHMARK_MAIN();
