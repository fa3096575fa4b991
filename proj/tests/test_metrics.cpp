#include <doctest.h>

#include <limits>
#include <sstream>

#include "srkit/metrics.hpp"
#include "testutil.hpp"

using namespace srkit;

TEST_CASE("psnr: identical images hit the infinity sentinel") {
  const ImageF32 a = testutil::random_image<float>(8, 8, 3, 1);
  CHECK(std::isinf(psnr(a, a, 1.0)));
}

TEST_CASE("psnr: uniform 0.1 difference is 20 dB") {
  ImageF32 a(16, 16, 1), b(16, 16, 1);
  for (auto& v : b.data) v = 0.1f;
  CHECK(std::abs(psnr(a, b, 1.0) - 20.0) <= 1e-6);
}

TEST_CASE("psnr is symmetric in its arguments") {
  const ImageF32 a = testutil::random_image<float>(12, 9, 3, 2);
  const ImageF32 b = testutil::random_image<float>(12, 9, 3, 3);
  CHECK(psnr(a, b, 1.0) == psnr(b, a, 1.0));
  CHECK_THROWS(psnr(a, ImageF32(3, 3, 3), 1.0));
}

TEST_CASE("psnr strictly decreases as noise grows") {
  const ImageF32 a = testutil::synthetic_image(32, 32, 4);
  double previous = 1e30;
  for (double amplitude : {0.01, 0.05, 0.2}) {
    ImageF32 b = a;
    SplitMix64 rng(5);
    for (auto& v : b.data)
      v += float(amplitude * (rng.next_double() * 2.0 - 1.0));
    const double p = psnr(a, b, 1.0);
    CHECK(p < previous);
    previous = p;
  }
}

TEST_CASE("ssim: identical images score 1") {
  ImageF32 a = testutil::random_image<float>(16, 16, 1, 6);
  CHECK(std::abs(ssim(a, a) - 1.0) <= 1e-9);
}

TEST_CASE("ssim: constant 0 vs constant 1 closed form") {
  ImageF32 a(16, 16, 1), b(16, 16, 1);
  for (auto& v : b.data) v = 1.0f;
  // C1 / (1 + C1) with C1 = 1e-4
  CHECK(std::abs(ssim(a, b) - 9.9990000999900015e-05) <= 1e-7);
}

TEST_CASE("ssim is symmetric and below 1 for distinct images") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ImageF32 a = testutil::random_image<float>(14, 18, 1, 700 + seed);
    const ImageF32 b = testutil::random_image<float>(14, 18, 1, 800 + seed);
    const double sab = ssim(a, b);
    CHECK(sab == ssim(b, a));
    CHECK(sab < 1.0);
    CHECK(sab >= -1.0);
  }
}

TEST_CASE("ssim of natural-image pairs lands in (0, 1]") {
  const ImageF32 hr = testutil::synthetic_image(48, 48, 7);
  ImageF32 noisy = hr;
  SplitMix64 rng(8);
  for (auto& v : noisy.data) v += float(0.02 * (rng.next_double() - 0.5));
  const ImageF32 ya = rgb_to_luma(hr);
  const ImageF32 yb = rgb_to_luma(noisy);
  const double s = ssim(ya, yb);
  CHECK(s > 0.0);
  CHECK(s <= 1.0);
}

TEST_CASE("ssim window preconditions") {
  CHECK_THROWS(ssim(ImageF32(10, 30, 1), ImageF32(10, 30, 1)));
  CHECK_THROWS(ssim(ImageF32(30, 10, 1), ImageF32(30, 10, 1)));
  CHECK_THROWS(ssim(testutil::random_image<float>(16, 16, 3, 1),
                    testutil::random_image<float>(16, 16, 3, 2)));
}

TEST_CASE("benchmark_pair: identity, luma conversion and border shave") {
  const ImageF32 hr = testutil::synthetic_image(48, 48, 9);
  const MetricReport self = benchmark_pair(hr, hr, 4);
  CHECK(std::isinf(self.psnr_db));
  CHECK(self.ssim == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(self.scale == 4);

  // differences confined to the shaved border vanish
  ImageF32 ring = hr;
  for (int c = 0; c < 3; ++c)
    for (int x = 0; x < ring.width; ++x) {
      ring.at(c, 0, x) = 0.0f;
      ring.at(c, ring.height - 1, x) = 1.0f;
    }
  const MetricReport shaved = benchmark_pair(hr, ring, 2);
  CHECK(std::isinf(shaved.psnr_db));

  // grayscale pair with uniform 0.1 offset, shave 0: the closed form again
  ImageF32 a(20, 20, 1), b(20, 20, 1);
  for (auto& v : b.data) v = 0.1f;
  const MetricReport gray = benchmark_pair(a, b, 0);
  CHECK(std::abs(gray.psnr_db - 20.0) <= 1e-6);

  // deterministic: same inputs, same report
  const MetricReport again = benchmark_pair(hr, ring, 2);
  CHECK(again.ssim == shaved.ssim);
}

TEST_CASE("metric CSV round-trips, including the inf sentinel") {
  std::vector<MetricReport> rows(3);
  rows[0] = {"set5", "baby", 4, 28.4217, 0.81041};
  rows[1] = {"set5", "bird", 4, std::numeric_limits<double>::infinity(), 1.0};
  rows[2] = {"toy", "img002", 2, 33.125, 0.93};

  std::stringstream ss;
  write_metric_csv(ss, rows);
  CHECK(ss.str().find("inf") != std::string::npos);

  const auto back = read_metric_csv(ss);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].dataset == rows[i].dataset);
    CHECK(back[i].image_id == rows[i].image_id);
    CHECK(back[i].scale == rows[i].scale);
    CHECK(back[i].ssim == rows[i].ssim);
  }
  CHECK(std::isinf(back[1].psnr_db));
  CHECK(back[0].psnr_db == rows[0].psnr_db);

  std::stringstream bad("nope\n");
  CHECK_THROWS(read_metric_csv(bad));
}
