#include <benchmark/benchmark.h>

#include "srkit/loss.hpp"
#include "srkit/rng.hpp"

namespace {

srkit::ImageF32 random_image(int h, int w, int c, std::uint64_t seed) {
  srkit::SplitMix64 rng(seed);
  srkit::ImageF32 img(h, w, c);
  for (auto& v : img.data) v = float(rng.next_double());
  return img;
}

void BM_GlrdnEdgeSum(benchmark::State& state) {
  const int n = int(state.range(0));
  const auto g = srkit::build_grid_graph(n, n, 4);
  const auto t = random_image(n, n, 3, 1);
  const auto y = random_image(n, n, 3, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(srkit::glrdn_edge_sum(t, y, g));
  }
}
BENCHMARK(BM_GlrdnEdgeSum)->Arg(48)->Arg(128)->Arg(256);

void BM_TotalLossGrad(benchmark::State& state) {
  const int n = int(state.range(0));
  const auto g = srkit::build_grid_graph(n, n, 4);
  const auto t = random_image(n, n, 3, 3);
  const auto y = random_image(n, n, 3, 4);
  for (auto _ : state) {
    auto grad = srkit::total_loss_grad(t, y, 1.0, g);
    benchmark::DoNotOptimize(grad.data.data());
  }
}
BENCHMARK(BM_TotalLossGrad)->Arg(48)->Arg(128);

}  // namespace
