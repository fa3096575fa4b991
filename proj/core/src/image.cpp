#include "srkit/image.hpp"

#include <algorithm>
#include <cmath>

namespace srkit {

ImageF64 widen(const ImageF32& img) {
  ImageF64 out(img.height, img.width, img.channels);
  for (std::size_t i = 0; i < img.data.size(); ++i)
    out.data[i] = double(img.data[i]);
  return out;
}

ImageF32 narrow(const ImageF64& img) {
  ImageF32 out(img.height, img.width, img.channels);
  for (std::size_t i = 0; i < img.data.size(); ++i)
    out.data[i] = float(img.data[i]);
  return out;
}

std::uint8_t quantize_u8(float v) {
  float c = std::clamp(v, 0.0f, 1.0f) * 255.0f;
  // round half away from zero, matching std::round
  return std::uint8_t(std::lround(c));
}

ImageF32 rgb_to_luma(const ImageF32& img) {
  if (img.channels != 3)
    throw std::invalid_argument("rgb_to_luma: input must have 3 channels");
  ImageF32 out(img.height, img.width, 1);
  const float* r = img.plane(0);
  const float* g = img.plane(1);
  const float* b = img.plane(2);
  float* y = out.plane(0);
  const std::size_t n = img.plane_size();
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = float(
        (65.481 * r[i] + 128.553 * g[i] + 24.966 * b[i] + 16.0) / 255.0);
  }
  return out;
}

ImageF32 shave_border(const ImageF32& img, int n) {
  if (n < 0) throw std::invalid_argument("shave_border: negative margin");
  if (n == 0) return img;
  if (2 * n >= img.height || 2 * n >= img.width)
    throw std::invalid_argument("shave_border: crop would be empty");
  ImageF32 out(img.height - 2 * n, img.width - 2 * n, img.channels);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < out.height; ++y)
      for (int x = 0; x < out.width; ++x)
        out.at(c, y, x) = img.at(c, y + n, x + n);
  return out;
}

}  // namespace srkit
