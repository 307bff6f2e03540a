// Serial reference kernels against their OpenMP counterparts on training-sized
// problems. Set OMP_NUM_THREADS to compare thread counts.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "coldplate/kernels.hpp"

using namespace coldplate::nn::kernels;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

// batch 8, 16 -> 16 channels, 9x9 kernel, on the reduced 77x102 grid or the full 154x203 grid
ConvShape conv_shape(const benchmark::State& state) {
    const bool full = state.range(0) != 0;
    return ConvShape{8, 16, 16, full ? 203u : 102u, full ? 154u : 77u, 9, 9};
}

struct ConvData {
    explicit ConvData(const ConvShape& s)
        : in(random_values(s.input_size(), 1)),
          w(random_values(s.weight_size(), 2)),
          b(random_values(s.out_channels, 3)),
          up(random_values(s.output_size(), 4)),
          out(s.output_size()),
          gi(s.input_size()),
          gw(s.weight_size()),
          gb(s.out_channels) {}
    std::vector<double> in, w, b, up, out, gi, gw, gb;
};

template <auto Kernel>
void BM_ConvForward(benchmark::State& state) {
    const ConvShape s = conv_shape(state);
    ConvData d(s);
    for (auto _ : state) {
        Kernel(s, d.in, d.w, d.b, d.out);
        benchmark::DoNotOptimize(d.out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.batch));
}

template <auto Kernel>
void BM_ConvBackward(benchmark::State& state) {
    const ConvShape s = conv_shape(state);
    ConvData d(s);
    for (auto _ : state) {
        Kernel(s, d.in, d.w, d.up, d.gi, d.gw, d.gb);
        benchmark::DoNotOptimize(d.gw.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.batch));
}

template <auto Forward, auto Backward>
void BM_Dense(benchmark::State& state) {
    const DenseShape s{static_cast<std::size_t>(state.range(0)), 64, 64};
    const auto in = random_values(s.batch * s.in_dim, 1);
    const auto w = random_values(s.in_dim * s.out_dim, 2);
    const auto b = random_values(s.out_dim, 3);
    const auto up = random_values(s.batch * s.out_dim, 4);
    std::vector<double> out(s.batch * s.out_dim), gi(in.size()), gw(w.size()), gb(b.size());
    for (auto _ : state) {
        Forward(s, in, w, b, out);
        Backward(s, in, w, up, gi, gw, gb);
        benchmark::DoNotOptimize(gw.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.batch));
}

}  // namespace

BENCHMARK(BM_ConvForward<conv2d_forward_reference>)->Name("conv_forward/reference")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvForward<conv2d_forward_parallel>)->Name("conv_forward/parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvBackward<conv2d_backward_reference>)->Name("conv_backward/reference")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvBackward<conv2d_backward_parallel>)->Name("conv_backward/parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Dense<dense_forward_reference, dense_backward_reference>)->Name("dense/reference")->Arg(31262);
BENCHMARK(BM_Dense<dense_forward_parallel, dense_backward_parallel>)->Name("dense/parallel")->Arg(31262);

BENCHMARK_MAIN();
