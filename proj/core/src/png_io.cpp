// Minimal 8-bit PNG codec over zlib. Reads color types 0 (gray), 2 (RGB),
// 4 (gray+alpha) and 6 (RGBA), non-interlaced; alpha is dropped on load.
// Writes color type 0 or 2 with filter 0 on every scanline.

#include <zlib.h>

#include <array>
#include <cstring>
#include <fstream>

#include "codec.hpp"
#include "srkit/image.hpp"

namespace srkit::detail {

namespace {

constexpr std::array<std::uint8_t, 8> kSignature = {0x89, 'P',  'N',  'G',
                                                    0x0D, 0x0A, 0x1A, 0x0A};

std::uint32_t be32(const std::uint8_t* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
         (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(std::uint8_t(v >> 24));
  out.push_back(std::uint8_t(v >> 16));
  out.push_back(std::uint8_t(v >> 8));
  out.push_back(std::uint8_t(v));
}

[[noreturn]] void corrupt(const std::filesystem::path& path,
                          const std::string& why) {
  throw IoError(IoError::Kind::CorruptData, path.string() + ": " + why);
}

int channels_for_color_type(int color_type) {
  switch (color_type) {
    case 0: return 1;  // gray
    case 2: return 3;  // RGB
    case 4: return 2;  // gray + alpha
    case 6: return 4;  // RGBA
    default: return 0;
  }
}

std::uint8_t paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a);
  const int pb = std::abs(p - b);
  const int pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return std::uint8_t(a);
  if (pb <= pc) return std::uint8_t(b);
  return std::uint8_t(c);
}

std::vector<std::uint8_t> zlib_inflate(const std::vector<std::uint8_t>& in,
                                       std::size_t expected,
                                       const std::filesystem::path& path) {
  std::vector<std::uint8_t> out(expected);
  uLongf out_len = uLongf(expected);
  const int rc = ::uncompress(out.data(), &out_len, in.data(), uLong(in.size()));
  if (rc != Z_OK || out_len != expected)
    corrupt(path, "zlib inflate failed on IDAT stream");
  return out;
}

std::vector<std::uint8_t> zlib_deflate(const std::vector<std::uint8_t>& in) {
  uLongf bound = ::compressBound(uLong(in.size()));
  std::vector<std::uint8_t> out(bound);
  const int rc =
      ::compress2(out.data(), &bound, in.data(), uLong(in.size()), 6);
  if (rc != Z_OK) throw IoError(IoError::Kind::WriteFailed, "zlib deflate failed");
  out.resize(bound);
  return out;
}

}  // namespace

Raw8 load_png_raw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError(IoError::Kind::MissingFile, "cannot open " + path.string());
  std::vector<std::uint8_t> file((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (file.size() < 8 || std::memcmp(file.data(), kSignature.data(), 8) != 0)
    corrupt(path, "not a PNG (bad signature)");

  std::size_t pos = 8;
  bool seen_ihdr = false, seen_iend = false;
  std::uint32_t width = 0, height = 0;
  int bit_depth = 0, color_type = 0;
  std::vector<std::uint8_t> idat;

  while (pos + 12 <= file.size() && !seen_iend) {
    const std::uint32_t len = be32(&file[pos]);
    if (pos + 12 + len > file.size()) corrupt(path, "truncated chunk");
    const char* type = reinterpret_cast<const char*>(&file[pos + 4]);
    const std::uint8_t* data = &file[pos + 8];
    const std::uint32_t stored_crc = be32(&file[pos + 8 + len]);
    std::uint32_t crc = std::uint32_t(::crc32(0, &file[pos + 4], len + 4));
    if (crc != stored_crc) corrupt(path, "chunk CRC mismatch");

    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (len != 13) corrupt(path, "bad IHDR length");
      width = be32(data);
      height = be32(data + 4);
      bit_depth = data[8];
      color_type = data[9];
      const int interlace = data[12];
      if (width == 0 || height == 0) corrupt(path, "zero image dimension");
      if (bit_depth != 8)
        throw IoError(IoError::Kind::UnsupportedFormat,
                      path.string() + ": only 8-bit PNG is supported");
      if (channels_for_color_type(color_type) == 0)
        throw IoError(IoError::Kind::UnsupportedFormat,
                      path.string() + ": unsupported PNG color type " +
                          std::to_string(color_type));
      if (interlace != 0)
        throw IoError(IoError::Kind::UnsupportedFormat,
                      path.string() + ": interlaced PNG is not supported");
      seen_ihdr = true;
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), data, data + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      seen_iend = true;
    }
    // ancillary chunks (gAMA, tEXt, ...) are skipped
    pos += 12 + len;
  }
  if (!seen_ihdr || !seen_iend || idat.empty())
    corrupt(path, "missing IHDR/IDAT/IEND");

  const int src_ch = channels_for_color_type(color_type);
  const std::size_t stride = std::size_t(width) * src_ch;
  const std::size_t expected = (stride + 1) * height;
  std::vector<std::uint8_t> scan = zlib_inflate(idat, expected, path);

  // undo per-row filters in place
  std::vector<std::uint8_t> pixels(stride * height);
  for (std::uint32_t y = 0; y < height; ++y) {
    const std::uint8_t filter = scan[(stride + 1) * y];
    const std::uint8_t* src = &scan[(stride + 1) * y + 1];
    std::uint8_t* cur = &pixels[stride * y];
    const std::uint8_t* up = y > 0 ? &pixels[stride * (y - 1)] : nullptr;
    switch (filter) {
      case 0:
        std::memcpy(cur, src, stride);
        break;
      case 1:  // Sub
        for (std::size_t i = 0; i < stride; ++i)
          cur[i] = std::uint8_t(src[i] +
                                (i >= std::size_t(src_ch) ? cur[i - src_ch] : 0));
        break;
      case 2:  // Up
        for (std::size_t i = 0; i < stride; ++i)
          cur[i] = std::uint8_t(src[i] + (up ? up[i] : 0));
        break;
      case 3:  // Average
        for (std::size_t i = 0; i < stride; ++i) {
          const int a = i >= std::size_t(src_ch) ? cur[i - src_ch] : 0;
          const int b = up ? up[i] : 0;
          cur[i] = std::uint8_t(src[i] + ((a + b) >> 1));
        }
        break;
      case 4:  // Paeth
        for (std::size_t i = 0; i < stride; ++i) {
          const int a = i >= std::size_t(src_ch) ? cur[i - src_ch] : 0;
          const int b = up ? up[i] : 0;
          const int c = (up && i >= std::size_t(src_ch)) ? up[i - src_ch] : 0;
          cur[i] = std::uint8_t(src[i] + paeth(a, b, c));
        }
        break;
      default:
        corrupt(path, "unknown scanline filter " + std::to_string(filter));
    }
  }

  Raw8 raw;
  raw.width = int(width);
  raw.height = int(height);
  raw.channels = src_ch >= 3 ? 3 : 1;
  raw.pixels.resize(std::size_t(raw.width) * raw.height * raw.channels);
  const std::size_t n = std::size_t(width) * height;
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < raw.channels; ++c)
      raw.pixels[i * raw.channels + c] = pixels[i * src_ch + c];
  return raw;
}

void save_png_raw(const Raw8& raw, const std::filesystem::path& path) {
  const int color_type = raw.channels == 3 ? 2 : 0;
  const std::size_t stride = std::size_t(raw.width) * raw.channels;

  std::vector<std::uint8_t> scan((stride + 1) * raw.height);
  for (int y = 0; y < raw.height; ++y) {
    scan[(stride + 1) * y] = 0;  // filter: none
    std::memcpy(&scan[(stride + 1) * y + 1], &raw.pixels[stride * y], stride);
  }
  const std::vector<std::uint8_t> idat = zlib_deflate(scan);

  std::vector<std::uint8_t> out;
  out.insert(out.end(), kSignature.begin(), kSignature.end());

  auto chunk = [&out](const char* type, const std::vector<std::uint8_t>& data) {
    put_be32(out, std::uint32_t(data.size()));
    const std::size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const std::uint32_t crc = std::uint32_t(
        ::crc32(0, &out[crc_start], uInt(4 + data.size())));
    put_be32(out, crc);
  };

  std::vector<std::uint8_t> ihdr;
  put_be32(ihdr, std::uint32_t(raw.width));
  put_be32(ihdr, std::uint32_t(raw.height));
  ihdr.push_back(8);                        // bit depth
  ihdr.push_back(std::uint8_t(color_type));
  ihdr.push_back(0);                        // compression
  ihdr.push_back(0);                        // filter method
  ihdr.push_back(0);                        // no interlace
  chunk("IHDR", ihdr);
  chunk("IDAT", idat);
  chunk("IEND", {});

  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw IoError(IoError::Kind::WriteFailed, "cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(out.data()), std::streamsize(out.size()));
  if (!f)
    throw IoError(IoError::Kind::WriteFailed, "short write to " + path.string());
}

}  // namespace srkit::detail
