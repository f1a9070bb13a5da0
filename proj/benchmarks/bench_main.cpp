#include <benchmark/benchmark.h>

#include <random>

#include "saldl/filters.hpp"
#include "saldl/halftone.hpp"
#include "saldl/metrics.hpp"
#include "saldl/networks.hpp"
#include "saldl/nn/layers.hpp"

using namespace saldl;

namespace {

GrayImage random_image(int side, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 1);
    GrayImage img(side, side);
    for (double& v : img.pixels()) v = u(rng);
    return img;
}

nn::Tensor4f random_tensor(int n, int c, int side, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> u(-1, 1);
    nn::Tensor4f t(n, c, side, side);
    for (float& v : t.data()) v = u(rng);
    return t;
}

nn::ConvParams<float> random_conv(int in, int out) {
    nn::ConvParams<float> p(in, out);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<float> u(-0.1f, 0.1f);
    for (float& w : p.weights) w = u(rng);
    return p;
}

void BM_ConvForward(benchmark::State& state) {
    const int ch = static_cast<int>(state.range(0));
    const auto x = random_tensor(16, ch, 32, 2);
    const auto p = random_conv(ch, ch);
    for (auto _ : state) benchmark::DoNotOptimize(nn::conv_forward(x, p));
    state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_ConvForward)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ConvBackward(benchmark::State& state) {
    const int ch = static_cast<int>(state.range(0));
    const auto x = random_tensor(16, ch, 32, 3);
    const auto p = random_conv(ch, ch);
    const auto g = random_tensor(16, ch, 32, 4);
    for (auto _ : state) benchmark::DoNotOptimize(nn::conv_backward(x, p, g));
    state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_ConvBackward)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ConvolveSame(benchmark::State& state) {
    const auto img = random_image(static_cast<int>(state.range(0)), 5);
    const Kernel k = default_gcm_kernel();
    for (auto _ : state) benchmark::DoNotOptimize(convolve_same(img, k));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()));
}
BENCHMARK(BM_ConvolveSame)->Arg(256)->Arg(512);

void BM_FloydSteinberg(benchmark::State& state) {
    const auto img = random_image(static_cast<int>(state.range(0)), 6);
    for (auto _ : state) benchmark::DoNotOptimize(floyd_steinberg(img));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()));
}
BENCHMARK(BM_FloydSteinberg)->Arg(256)->Arg(512);

void BM_Ssim(benchmark::State& state) {
    const auto a = random_image(static_cast<int>(state.range(0)), 7);
    const auto b = random_image(static_cast<int>(state.range(0)), 8);
    for (auto _ : state) benchmark::DoNotOptimize(ssim(a, b));
}
BENCHMARK(BM_Ssim)->Arg(256);

void BM_ReconstructDesk(benchmark::State& state) {
    auto bundle = ModelBundle::create(ArchConfig::desk(), 1);
    bundle.stage1.trained = bundle.stage2.trained = bundle.stage3.trained = true;
    const GrayImage h = floyd_steinberg(random_image(static_cast<int>(state.range(0)), 9)).to_gray();
    for (auto _ : state) benchmark::DoNotOptimize(reconstruct(h, bundle));
}
BENCHMARK(BM_ReconstructDesk)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
