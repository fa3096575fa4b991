#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace srkit {

// Planar floating-point image: samples laid out channel-major, then
// row-major ([c][y][x]). Values are nominally in [0,1]; arithmetic never
// clamps, only save_image does (at quantization time).
template <typename T>
struct Planar {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<T> data;

  Planar() = default;
  Planar(int h, int w, int c)
      : height(h), width(w), channels(c),
        data(std::size_t(h) * std::size_t(w) * std::size_t(c), T(0)) {}

  std::size_t plane_size() const {
    return std::size_t(height) * std::size_t(width);
  }
  std::size_t sample_count() const { return plane_size() * channels; }

  T* plane(int c) { return data.data() + plane_size() * c; }
  const T* plane(int c) const { return data.data() + plane_size() * c; }

  T& at(int c, int y, int x) {
    return data[plane_size() * c + std::size_t(y) * width + x];
  }
  T at(int c, int y, int x) const {
    return data[plane_size() * c + std::size_t(y) * width + x];
  }

  bool same_shape(const Planar& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }
};

using ImageF32 = Planar<float>;
using ImageF64 = Planar<double>;

ImageF64 widen(const ImageF32& img);
ImageF32 narrow(const ImageF64& img);

// Index of a pixel within one channel plane, row-major:
// index = row * width + col.
using PixelIndex = std::int32_t;

struct IoError : std::runtime_error {
  enum class Kind {
    MissingFile,
    UnsupportedFormat,
    CorruptData,
    WriteFailed,
  };
  Kind kind;
  IoError(Kind k, const std::string& what)
      : std::runtime_error(what), kind(k) {}
};

// Reads an 8-bit PNG, binary PPM (P6) or binary PGM (P5). Byte v maps to
// v/255. Color inputs come back with 3 channels (PNG alpha is dropped),
// grayscale with 1.
ImageF32 load_image(const std::filesystem::path& path);

// Writes PNG/PPM/PGM chosen by extension. Samples are clamped to [0,1] and
// quantized by round-half-away-from-zero of v*255.
void save_image(const ImageF32& img, const std::filesystem::path& path);

// BT.601 luma with the [16,235] studio swing used by SR benchmark tables:
// Y = (65.481 R + 128.553 G + 24.966 B + 16) / 255.
ImageF32 rgb_to_luma(const ImageF32& img);

// Central crop removing n pixels from every side, all channels.
ImageF32 shave_border(const ImageF32& img, int n);

// Quantization rule shared by every writer.
std::uint8_t quantize_u8(float v);

}  // namespace srkit
