#include <benchmark/benchmark.h>

#include "srkit/net.hpp"
#include "srkit/rng.hpp"

namespace {

srkit::ImageF32 random_image(int h, int w, int c, std::uint64_t seed) {
  srkit::SplitMix64 rng(seed);
  srkit::ImageF32 img(h, w, c);
  for (auto& v : img.data) v = float(rng.next_double());
  return img;
}

// default training geometry: 48x48 RGB patch
void BM_NetForward(benchmark::State& state) {
  srkit::NetConfig cfg;
  cfg.blocks = int(state.range(0));
  cfg.channels = int(state.range(1));
  cfg.seed = 1;
  const auto params = srkit::init_params<float>(cfg);
  const auto x = random_image(48, 48, 3, 2);
  for (auto _ : state) {
    auto y = srkit::forward(params, x);
    benchmark::DoNotOptimize(y.data.data());
  }
}
BENCHMARK(BM_NetForward)->Args({4, 16})->Args({8, 32});

void BM_NetForwardBackward(benchmark::State& state) {
  srkit::NetConfig cfg;
  cfg.blocks = int(state.range(0));
  cfg.channels = int(state.range(1));
  cfg.seed = 1;
  const auto params = srkit::init_params<float>(cfg);
  const auto x = random_image(48, 48, 3, 2);
  const auto gout = random_image(48, 48, 3, 3);
  for (auto _ : state) {
    srkit::ForwardCache<float> cache;
    auto y = srkit::forward(params, x, &cache);
    auto grads = srkit::make_zero_grads(params);
    auto dx = srkit::backward(params, x, cache, gout, grads);
    benchmark::DoNotOptimize(dx.data.data());
  }
}
BENCHMARK(BM_NetForwardBackward)->Args({4, 16})->Args({8, 32});

}  // namespace
