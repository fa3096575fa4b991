#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "srkit/image.hpp"

namespace srkit {

// Architecture hyperparameters of the residual super-resolution network:
// head conv (in -> F), `blocks` residual blocks (conv-ReLU-conv plus
// identity skip), tail conv (F -> in), and a global skip adding the input.
// All convs are 3x3, stride 1, zero-padded to preserve shape.
struct NetConfig {
  int blocks = 4;
  int channels = 16;
  int kernel = 3;  // fixed
  int in_channels = 3;
  std::uint64_t seed = 0;

  int conv_count() const { return 2 + 2 * blocks; }
  std::size_t parameter_count() const;
  void validate() const;
  bool operator==(const NetConfig&) const = default;
};

template <typename T>
struct ConvParam {
  int out_ch = 0;
  int in_ch = 0;
  int k = 0;
  std::vector<T> w;  // out_ch * in_ch * k * k, row-major
  std::vector<T> b;  // out_ch

  std::size_t weight_count() const { return w.size() + b.size(); }
};

// Weights in checkpoint order: head, then conv1/conv2 of each block, then
// tail. Training runs on NetParamsT<float>; NetParamsT<double> exists for
// finite-difference verification.
template <typename T>
struct NetParamsT {
  NetConfig cfg;
  std::vector<ConvParam<T>> layers;
};

using NetParams = NetParamsT<float>;

// "head", "block3.conv2", "tail" -- used by diagnostics.
std::string layer_name(const NetConfig& cfg, int layer_idx);

// Seeded He-normal weights (std = sqrt(2 / fan_in)), zero biases. The
// draw order (layer order, then tensor order) is part of the contract:
// the same seed always yields the same parameters.
template <typename T>
NetParamsT<T> init_params(const NetConfig& cfg);

// Activations retained by a forward pass for the matching backward pass.
template <typename T>
struct ForwardCache {
  Planar<T> head_out;
  std::vector<Planar<T>> pre_act;    // conv1 output per block, pre-ReLU
  std::vector<Planar<T>> post_act;   // after ReLU
  std::vector<Planar<T>> block_out;  // after the block skip add
};

// y = x + tail(blocks(head(x))); output shape equals input shape.
template <typename T>
Planar<T> forward(const NetParamsT<T>& params, const Planar<T>& x,
                  ForwardCache<T>* cache = nullptr);

template <typename T>
struct NetGrads {
  std::vector<ConvParam<T>> layers;  // same shapes as the parameters
};

template <typename T>
NetGrads<T> make_zero_grads(const NetParamsT<T>& params);

// into += from, in fixed element order.
template <typename T>
void accumulate_grads(NetGrads<T>& into, const NetGrads<T>& from);

// Exact gradients of the scalar whose output-gradient is grad_out, with
// respect to every parameter (written into grads) and to the input
// (returned). Requires the cache produced by forward() on the same x.
template <typename T>
Planar<T> backward(const NetParamsT<T>& params, const Planar<T>& x,
                   const ForwardCache<T>& cache, const Planar<T>& grad_out,
                   NetGrads<T>& grads);

// Checkpoint: one "SRKIT-CKPT 1" line, one key=value header line
// (config, step, lr), then raw little-endian float32 tensors in layer
// order, weights before biases.
struct Checkpoint {
  NetParams params;
  std::int64_t step = 0;
  double lr = 0.0;
};

void save_checkpoint(const Checkpoint& ckpt,
                     const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace srkit
