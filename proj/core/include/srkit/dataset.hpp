#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "srkit/image.hpp"

namespace srkit {

// Training patches are cut on the HR grid: the network runs
// post-upsampling, so inputs (bicubic-upscaled LR) and targets share the
// HR geometry.
inline constexpr int kPatchSize = 48;

// One HR image with its degraded counterpart resampled back to the HR
// grid. hr is cropped so both dimensions are multiples of scale.
struct SamplePair {
  ImageF32 hr;
  ImageF32 lr_up;
  int scale = 0;
  std::string source_id;
};

struct PatchBatch {
  std::vector<ImageF32> inputs;   // from lr_up
  std::vector<ImageF32> targets;  // from hr, same coordinates
};

// Crops hr to a multiple of scale, bicubic-downscales by scale and
// bicubic-upscales back. The intermediate LR image is recomputable via
// bicubic_resize and is not stored.
SamplePair make_pair(const ImageF32& hr, int scale, std::string source_id = "");

// count seeded uniform 48x48 crops; inputs from lr_up and targets from hr
// at identical coordinates.
PatchBatch extract_patches(const SamplePair& pair, int count,
                           std::uint64_t rng_seed);

// One of the 8 dihedral transforms (rotations x optional horizontal
// flip), chosen uniformly by the seed, applied to both patches.
std::pair<ImageF32, ImageF32> augment(const ImageF32& input,
                                      const ImageF32& target,
                                      std::uint64_t rng_seed);

// k in [0,8): k & 3 counterclockwise quarter turns, then a horizontal
// flip if k & 4. Requires a square image.
ImageF32 apply_dihedral(const ImageF32& img, int k);

ImageF32 rotate90_ccw(const ImageF32& img);
ImageF32 flip_horizontal(const ImageF32& img);

// Sorted list of *.png / *.ppm / *.pgm files directly inside dir.
std::vector<std::filesystem::path> list_image_files(
    const std::filesystem::path& dir);

// Batch degradation: for every HR image in in_dir, writes the bicubic
// downscale under out_dir/lr/ and its re-upscale under out_dir/lr_up/
// (same filenames), plus out_dir/manifest.csv with columns
// source_id,hr_h,hr_w,scale. Returns the number of images processed.
int degrade_directory(const std::filesystem::path& in_dir,
                      const std::filesystem::path& out_dir, int scale);

}  // namespace srkit
