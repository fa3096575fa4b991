#include "srkit/resize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace srkit {

namespace {

// Keys cubic convolution kernel, a = -0.5.
double cubic(double x) {
  x = std::abs(x);
  if (x < 1.0) return (1.5 * x - 2.5) * x * x + 1.0;
  if (x < 2.0) return ((-0.5 * x + 2.5) * x - 4.0) * x + 2.0;
  return 0.0;
}

struct TapTable {
  int taps = 0;
  std::vector<int> index;     // out * taps source indices, edge-clamped
  std::vector<double> weight; // out * taps normalized weights
};

TapTable build_taps(int in, int out) {
  const double scale = double(out) / double(in);
  const bool shrink = scale < 1.0;
  const double support = shrink ? 2.0 / scale : 2.0;

  TapTable t;
  t.taps = int(std::ceil(2.0 * support)) + 1;
  t.index.resize(std::size_t(out) * t.taps);
  t.weight.resize(std::size_t(out) * t.taps);

  for (int o = 0; o < out; ++o) {
    const double center = (o + 0.5) / scale - 0.5;
    const int left = int(std::floor(center - support)) + 1;
    double sum = 0.0;
    for (int k = 0; k < t.taps; ++k) {
      const int src = left + k;
      const double x = center - src;
      const double w = shrink ? scale * cubic(scale * x) : cubic(x);
      t.index[std::size_t(o) * t.taps + k] = std::clamp(src, 0, in - 1);
      t.weight[std::size_t(o) * t.taps + k] = w;
      sum += w;
    }
    for (int k = 0; k < t.taps; ++k)
      t.weight[std::size_t(o) * t.taps + k] /= sum;
  }
  return t;
}

}  // namespace

ImageF32 bicubic_resize(const ImageF32& img, int out_h, int out_w) {
  if (out_h < 1 || out_w < 1)
    throw std::invalid_argument("bicubic_resize: zero target dimension");
  if (img.height < 1 || img.width < 1 || img.channels < 1)
    throw std::invalid_argument("bicubic_resize: empty input");

  const TapTable tx = build_taps(img.width, out_w);
  const TapTable ty = build_taps(img.height, out_h);

  ImageF32 out(out_h, out_w, img.channels);
  std::vector<double> row_pass(std::size_t(img.height) * out_w);
  std::vector<double> column(img.height);

  for (int c = 0; c < img.channels; ++c) {
    const float* src = img.plane(c);
    // horizontal pass, full height
    for (int y = 0; y < img.height; ++y) {
      const float* srow = src + std::size_t(y) * img.width;
      double* drow = row_pass.data() + std::size_t(y) * out_w;
      for (int x = 0; x < out_w; ++x) {
        const int* idx = &tx.index[std::size_t(x) * tx.taps];
        const double* w = &tx.weight[std::size_t(x) * tx.taps];
        double acc = 0.0;
        for (int k = 0; k < tx.taps; ++k) acc += w[k] * srow[idx[k]];
        drow[x] = acc;
      }
    }
    // vertical pass
    float* dst = out.plane(c);
    for (int x = 0; x < out_w; ++x) {
      for (int y = 0; y < img.height; ++y)
        column[y] = row_pass[std::size_t(y) * out_w + x];
      for (int y = 0; y < out_h; ++y) {
        const int* idx = &ty.index[std::size_t(y) * ty.taps];
        const double* w = &ty.weight[std::size_t(y) * ty.taps];
        double acc = 0.0;
        for (int k = 0; k < ty.taps; ++k) acc += w[k] * column[idx[k]];
        dst[std::size_t(y) * out_w + x] = float(acc);
      }
    }
  }
  return out;
}

}  // namespace srkit
