#include <benchmark/benchmark.h>

#include "srkit/metrics.hpp"
#include "srkit/resize.hpp"
#include "srkit/rng.hpp"

namespace {

srkit::ImageF32 random_image(int h, int w, int c, std::uint64_t seed) {
  srkit::SplitMix64 rng(seed);
  srkit::ImageF32 img(h, w, c);
  for (auto& v : img.data) v = float(rng.next_double());
  return img;
}

void BM_BicubicDown4(benchmark::State& state) {
  const int n = int(state.range(0));
  const auto img = random_image(n, n, 3, 1);
  for (auto _ : state) {
    auto out = srkit::bicubic_resize(img, n / 4, n / 4);
    benchmark::DoNotOptimize(out.data.data());
  }
}
BENCHMARK(BM_BicubicDown4)->Arg(128)->Arg(512);

void BM_BicubicUp4(benchmark::State& state) {
  const int n = int(state.range(0));
  const auto img = random_image(n, n, 3, 2);
  for (auto _ : state) {
    auto out = srkit::bicubic_resize(img, n * 4, n * 4);
    benchmark::DoNotOptimize(out.data.data());
  }
}
BENCHMARK(BM_BicubicUp4)->Arg(32)->Arg(128);

void BM_Ssim(benchmark::State& state) {
  const int n = int(state.range(0));
  const auto a = random_image(n, n, 1, 3);
  const auto b = random_image(n, n, 1, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(srkit::ssim(a, b));
  }
}
BENCHMARK(BM_Ssim)->Arg(64)->Arg(256);

void BM_Psnr(benchmark::State& state) {
  const int n = int(state.range(0));
  const auto a = random_image(n, n, 3, 5);
  const auto b = random_image(n, n, 3, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(srkit::psnr(a, b, 1.0));
  }
}
BENCHMARK(BM_Psnr)->Arg(256)->Arg(1024);

}  // namespace
