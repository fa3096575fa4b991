#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "srkit/image.hpp"

namespace srkit {

// One evaluation row. psnr_db is +infinity for identical inputs and is
// serialized as the string "inf".
struct MetricReport {
  std::string dataset;
  std::string image_id;
  int scale = 0;
  double psnr_db = 0.0;
  double ssim = 0.0;
};

// 10 * log10(peak^2 / MSE), MSE averaged over every compared sample.
double psnr(const ImageF32& a, const ImageF32& b, double peak = 1.0);

// Mean SSIM map, 11x11 Gaussian window sigma=1.5, K1=0.01, K2=0.03,
// dynamic range 1.0, valid-region convolution (no padded borders).
double ssim(const ImageF32& a, const ImageF32& b);

// Benchmark-table conventions: convert to BT.601 luma (3-channel inputs
// only; single-channel images are compared as-is), shave `scale` border
// pixels, then compute PSNR and SSIM. dataset/image_id are left for the
// caller to fill.
MetricReport benchmark_pair(const ImageF32& hr, const ImageF32& sr, int scale);

// CSV schema: dataset,image_id,scale,psnr_db,ssim
void write_metric_csv(std::ostream& out, std::span<const MetricReport> rows);
std::vector<MetricReport> read_metric_csv(std::istream& in);

}  // namespace srkit
