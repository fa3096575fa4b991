#pragma once

// Internal codec entry points shared between image_io.cpp and png_io.cpp.

#include <cstdint>
#include <filesystem>
#include <vector>

#include "srkit/image.hpp"

namespace srkit::detail {

// Raw 8-bit interleaved pixel buffer as decoded from a file.
struct Raw8 {
  int height = 0;
  int width = 0;
  int channels = 0;  // 1 or 3 after alpha drop
  std::vector<std::uint8_t> pixels;
};

Raw8 load_png_raw(const std::filesystem::path& path);
void save_png_raw(const Raw8& raw, const std::filesystem::path& path);

}  // namespace srkit::detail
