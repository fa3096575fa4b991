#pragma once

#include "srkit/image.hpp"

namespace srkit {

// Separable bicubic resampling with the Keys kernel (a = -0.5). Output
// sample o maps to source coordinate (o + 0.5) * in/out - 0.5; taps beyond
// the border clamp to the edge sample. When downscaling, the kernel is
// widened by the inverse scale (anti-aliasing), and every tap set is
// normalized to sum to 1. Weight math runs in 64-bit.
ImageF32 bicubic_resize(const ImageF32& img, int out_h, int out_w);

}  // namespace srkit
