#include "srkit/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "srkit/resize.hpp"
#include "srkit/rng.hpp"

namespace srkit {

SamplePair make_pair(const ImageF32& hr, int scale, std::string source_id) {
  if (scale != 2 && scale != 3 && scale != 4)
    throw std::invalid_argument("make_pair: scale must be 2, 3 or 4");
  const int ch = hr.height - hr.height % scale;
  const int cw = hr.width - hr.width % scale;
  if (ch < scale || cw < scale)
    throw std::invalid_argument(
        "make_pair: image too small (" + std::to_string(hr.height) + "x" +
        std::to_string(hr.width) + " at scale " + std::to_string(scale) + ")");

  SamplePair pair;
  pair.scale = scale;
  pair.source_id = std::move(source_id);
  if (ch == hr.height && cw == hr.width) {
    pair.hr = hr;
  } else {
    pair.hr = ImageF32(ch, cw, hr.channels);
    for (int c = 0; c < hr.channels; ++c)
      for (int y = 0; y < ch; ++y)
        for (int x = 0; x < cw; ++x) pair.hr.at(c, y, x) = hr.at(c, y, x);
  }
  const ImageF32 lr = bicubic_resize(pair.hr, ch / scale, cw / scale);
  pair.lr_up = bicubic_resize(lr, ch, cw);
  return pair;
}

namespace {

ImageF32 crop(const ImageF32& img, int top, int left, int size) {
  ImageF32 out(size, size, img.channels);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x)
        out.at(c, y, x) = img.at(c, top + y, left + x);
  return out;
}

}  // namespace

PatchBatch extract_patches(const SamplePair& pair, int count,
                           std::uint64_t rng_seed) {
  if (count < 1) throw std::invalid_argument("extract_patches: count < 1");
  if (pair.hr.height < kPatchSize || pair.hr.width < kPatchSize)
    throw std::invalid_argument(
        "extract_patches: image smaller than the 48x48 patch (" +
        std::to_string(pair.hr.height) + "x" + std::to_string(pair.hr.width) +
        ")");
  if (!pair.hr.same_shape(pair.lr_up))
    throw std::invalid_argument("extract_patches: malformed sample pair");

  SplitMix64 rng(rng_seed);
  PatchBatch batch;
  batch.inputs.reserve(count);
  batch.targets.reserve(count);
  const std::uint32_t max_top = std::uint32_t(pair.hr.height - kPatchSize + 1);
  const std::uint32_t max_left = std::uint32_t(pair.hr.width - kPatchSize + 1);
  for (int k = 0; k < count; ++k) {
    const int top = int(rng.next_below(max_top));
    const int left = int(rng.next_below(max_left));
    batch.inputs.push_back(crop(pair.lr_up, top, left, kPatchSize));
    batch.targets.push_back(crop(pair.hr, top, left, kPatchSize));
  }
  return batch;
}

ImageF32 rotate90_ccw(const ImageF32& img) {
  // (y, x) -> (h'-1-x', ...): output row y' = input column (w-1-y')
  ImageF32 out(img.width, img.height, img.channels);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < out.height; ++y)
      for (int x = 0; x < out.width; ++x)
        out.at(c, y, x) = img.at(c, x, img.width - 1 - y);
  return out;
}

ImageF32 flip_horizontal(const ImageF32& img) {
  ImageF32 out(img.height, img.width, img.channels);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        out.at(c, y, x) = img.at(c, y, img.width - 1 - x);
  return out;
}

ImageF32 apply_dihedral(const ImageF32& img, int k) {
  if (img.height != img.width)
    throw std::invalid_argument("apply_dihedral: patch must be square");
  if (k < 0 || k > 7) throw std::invalid_argument("apply_dihedral: k not in [0,8)");
  ImageF32 out = img;
  for (int r = 0; r < (k & 3); ++r) out = rotate90_ccw(out);
  if (k & 4) out = flip_horizontal(out);
  return out;
}

std::pair<ImageF32, ImageF32> augment(const ImageF32& input,
                                      const ImageF32& target,
                                      std::uint64_t rng_seed) {
  if (input.height != input.width || target.height != target.width)
    throw std::invalid_argument("augment: patches must be square");
  SplitMix64 rng(rng_seed);
  const int k = int(rng.next_below(8));
  return {apply_dihedral(input, k), apply_dihedral(target, k)};
}

int degrade_directory(const std::filesystem::path& in_dir,
                      const std::filesystem::path& out_dir, int scale) {
  const auto files = list_image_files(in_dir);
  if (files.empty())
    throw std::runtime_error("degrade: no images in " + in_dir.string());
  std::filesystem::create_directories(out_dir / "lr");
  std::filesystem::create_directories(out_dir / "lr_up");
  std::ofstream manifest(out_dir / "manifest.csv");
  if (!manifest)
    throw std::runtime_error("degrade: cannot write manifest under " +
                             out_dir.string());
  manifest << "source_id,hr_h,hr_w,scale\n";
  int count = 0;
  for (const auto& file : files) {
    const SamplePair pair =
        make_pair(load_image(file), scale, file.stem().string());
    const ImageF32 lr =
        bicubic_resize(pair.hr, pair.hr.height / scale, pair.hr.width / scale);
    save_image(lr, out_dir / "lr" / file.filename());
    save_image(pair.lr_up, out_dir / "lr_up" / file.filename());
    manifest << pair.source_id << "," << pair.hr.height << ","
             << pair.hr.width << "," << scale << "\n";
    ++count;
  }
  return count;
}

std::vector<std::filesystem::path> list_image_files(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw std::invalid_argument("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    if (ext == ".png" || ext == ".ppm" || ext == ".pgm")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace srkit
