#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "srkit/net.hpp"

namespace srkit {

namespace {

constexpr char kMagic[] = "SRKIT-CKPT 1";

void put_f32_le(std::string& out, float v) {
  const std::uint32_t u = std::bit_cast<std::uint32_t>(v);
  out.push_back(char(u & 0xFF));
  out.push_back(char((u >> 8) & 0xFF));
  out.push_back(char((u >> 16) & 0xFF));
  out.push_back(char((u >> 24) & 0xFF));
}

float get_f32_le(const char* p) {
  const std::uint32_t u = std::uint32_t(std::uint8_t(p[0])) |
                          (std::uint32_t(std::uint8_t(p[1])) << 8) |
                          (std::uint32_t(std::uint8_t(p[2])) << 16) |
                          (std::uint32_t(std::uint8_t(p[3])) << 24);
  return std::bit_cast<float>(u);
}

[[noreturn]] void bad(const std::filesystem::path& path, const std::string& why) {
  throw IoError(IoError::Kind::CorruptData,
                path.string() + ": " + why);
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  const NetConfig& cfg = ckpt.params.cfg;
  char header[256];
  std::snprintf(header, sizeof header,
                "blocks=%d channels=%d kernel=%d in_channels=%d seed=%llu "
                "step=%lld lr=%.17g\n",
                cfg.blocks, cfg.channels, cfg.kernel, cfg.in_channels,
                (unsigned long long)cfg.seed, (long long)ckpt.step, ckpt.lr);

  std::string payload;
  payload.reserve(4 * cfg.parameter_count());
  for (const auto& layer : ckpt.params.layers) {
    for (float v : layer.w) put_f32_le(payload, v);
    for (float v : layer.b) put_f32_le(payload, v);
  }

  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError(IoError::Kind::WriteFailed, "cannot write " + path.string());
  out << kMagic << "\n" << header;
  out.write(payload.data(), std::streamsize(payload.size()));
  if (!out)
    throw IoError(IoError::Kind::WriteFailed, "short write to " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError(IoError::Kind::MissingFile, "cannot open " + path.string());
  std::string magic, header;
  if (!std::getline(in, magic) || magic != kMagic)
    bad(path, "not a checkpoint (bad magic line)");
  if (!std::getline(in, header)) bad(path, "missing header line");

  Checkpoint ckpt;
  NetConfig cfg;
  unsigned long long seed = 0;
  long long step = 0;
  double lr = 0.0;
  if (std::sscanf(header.c_str(),
                  "blocks=%d channels=%d kernel=%d in_channels=%d seed=%llu "
                  "step=%lld lr=%lg",
                  &cfg.blocks, &cfg.channels, &cfg.kernel, &cfg.in_channels,
                  &seed, &step, &lr) != 7)
    bad(path, "malformed header line");
  cfg.seed = seed;
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    bad(path, std::string("invalid config: ") + e.what());
  }

  ckpt.step = step;
  ckpt.lr = lr;
  ckpt.params.cfg = cfg;

  // layer shapes are implied by the config; fill in declaration order
  NetParams zero = init_params<float>(NetConfig{cfg.blocks, cfg.channels,
                                                cfg.kernel, cfg.in_channels,
                                                cfg.seed});
  ckpt.params.layers = std::move(zero.layers);

  std::string payload((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  if (payload.size() != 4 * cfg.parameter_count())
    bad(path, "payload size does not match the declared config");
  const char* p = payload.data();
  for (auto& layer : ckpt.params.layers) {
    for (float& v : layer.w) {
      v = get_f32_le(p);
      p += 4;
    }
    for (float& v : layer.b) {
      v = get_f32_le(p);
      p += 4;
    }
  }
  return ckpt;
}

}  // namespace srkit
