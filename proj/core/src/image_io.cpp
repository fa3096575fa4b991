#include <algorithm>
#include <cctype>
#include <fstream>
#include <string>

#include "codec.hpp"
#include "srkit/image.hpp"

namespace srkit {

namespace {

using detail::Raw8;

std::string lower_ext(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

ImageF32 from_raw(const Raw8& raw) {
  ImageF32 img(raw.height, raw.width, raw.channels);
  const std::size_t n = img.plane_size();
  for (int c = 0; c < raw.channels; ++c) {
    float* dst = img.plane(c);
    const std::uint8_t* src = raw.pixels.data() + c;
    for (std::size_t i = 0; i < n; ++i)
      dst[i] = float(src[i * raw.channels]) / 255.0f;
  }
  return img;
}

Raw8 to_raw(const ImageF32& img) {
  Raw8 raw;
  raw.height = img.height;
  raw.width = img.width;
  raw.channels = img.channels;
  raw.pixels.resize(img.sample_count());
  const std::size_t n = img.plane_size();
  for (int c = 0; c < img.channels; ++c) {
    const float* src = img.plane(c);
    std::uint8_t* dst = raw.pixels.data() + c;
    for (std::size_t i = 0; i < n; ++i)
      dst[i * img.channels] = quantize_u8(src[i]);
  }
  return raw;
}

// Reads one PNM header token, skipping whitespace and '#' comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (!std::isspace(ch)) {
      tok.push_back(char(ch));
      break;
    }
  }
  while ((ch = in.get()) != EOF && !std::isspace(ch)) tok.push_back(char(ch));
  return tok;
}

Raw8 load_pnm(const std::filesystem::path& path, int channels) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError(IoError::Kind::MissingFile,
                  "cannot open " + path.string());
  std::string magic = pnm_token(in);
  const char* want = channels == 3 ? "P6" : "P5";
  if (magic != want)
    throw IoError(IoError::Kind::CorruptData,
                  path.string() + ": expected " + want + " magic, got '" +
                      magic + "'");
  Raw8 raw;
  raw.channels = channels;
  try {
    raw.width = std::stoi(pnm_token(in));
    raw.height = std::stoi(pnm_token(in));
  } catch (const std::exception&) {
    throw IoError(IoError::Kind::CorruptData,
                  path.string() + ": malformed PNM dimensions");
  }
  std::string maxval = pnm_token(in);
  if (maxval != "255")
    throw IoError(IoError::Kind::UnsupportedFormat,
                  path.string() + ": only maxval 255 is supported, got '" +
                      maxval + "'");
  if (raw.width <= 0 || raw.height <= 0)
    throw IoError(IoError::Kind::CorruptData,
                  path.string() + ": non-positive PNM dimensions");
  raw.pixels.resize(std::size_t(raw.width) * raw.height * channels);
  in.read(reinterpret_cast<char*>(raw.pixels.data()),
          std::streamsize(raw.pixels.size()));
  if (std::size_t(in.gcount()) != raw.pixels.size())
    throw IoError(IoError::Kind::CorruptData,
                  path.string() + ": truncated PNM pixel data");
  return raw;
}

void save_pnm(const Raw8& raw, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError(IoError::Kind::WriteFailed,
                  "cannot write " + path.string());
  out << (raw.channels == 3 ? "P6" : "P5") << "\n"
      << raw.width << " " << raw.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(raw.pixels.data()),
            std::streamsize(raw.pixels.size()));
  if (!out)
    throw IoError(IoError::Kind::WriteFailed,
                  "short write to " + path.string());
}

}  // namespace

ImageF32 load_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw IoError(IoError::Kind::MissingFile, "no such file: " + path.string());
  const std::string ext = lower_ext(path);
  if (ext == ".png") return from_raw(detail::load_png_raw(path));
  if (ext == ".ppm") return from_raw(load_pnm(path, 3));
  if (ext == ".pgm") return from_raw(load_pnm(path, 1));
  throw IoError(IoError::Kind::UnsupportedFormat,
                "unsupported image format: " + path.string());
}

void save_image(const ImageF32& img, const std::filesystem::path& path) {
  if (img.channels != 1 && img.channels != 3)
    throw std::invalid_argument("save_image: channels must be 1 or 3");
  if (img.data.size() != img.sample_count())
    throw std::invalid_argument("save_image: data size does not match shape");
  const std::string ext = lower_ext(path);
  const Raw8 raw = to_raw(img);
  if (ext == ".png") {
    detail::save_png_raw(raw, path);
  } else if (ext == ".ppm") {
    if (img.channels != 3)
      throw IoError(IoError::Kind::UnsupportedFormat,
                    "PPM requires 3 channels: " + path.string());
    save_pnm(raw, path);
  } else if (ext == ".pgm") {
    if (img.channels != 1)
      throw IoError(IoError::Kind::UnsupportedFormat,
                    "PGM requires 1 channel: " + path.string());
    save_pnm(raw, path);
  } else {
    throw IoError(IoError::Kind::UnsupportedFormat,
                  "unsupported output extension: " + path.string());
  }
}

}  // namespace srkit
