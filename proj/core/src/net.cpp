#include "srkit/net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "srkit/rng.hpp"

namespace srkit {

void NetConfig::validate() const {
  if (blocks < 0) throw std::invalid_argument("NetConfig: blocks must be >= 0");
  if (channels < 1) throw std::invalid_argument("NetConfig: channels must be >= 1");
  if (kernel != 3) throw std::invalid_argument("NetConfig: kernel is fixed at 3");
  if (in_channels != 1 && in_channels != 3)
    throw std::invalid_argument("NetConfig: in_channels must be 1 or 3");
}

std::size_t NetConfig::parameter_count() const {
  const std::size_t k2 = std::size_t(kernel) * kernel;
  const std::size_t head = std::size_t(channels) * in_channels * k2 + channels;
  const std::size_t block =
      2 * (std::size_t(channels) * channels * k2 + channels);
  const std::size_t tail = std::size_t(in_channels) * channels * k2 + in_channels;
  return head + std::size_t(blocks) * block + tail;
}

std::string layer_name(const NetConfig& cfg, int layer_idx) {
  if (layer_idx == 0) return "head";
  if (layer_idx == cfg.conv_count() - 1) return "tail";
  const int b = (layer_idx - 1) / 2;
  const int c = (layer_idx - 1) % 2 + 1;
  return "block" + std::to_string(b) + ".conv" + std::to_string(c);
}

namespace {

template <typename T>
ConvParam<T> make_conv(int out_ch, int in_ch, int k) {
  ConvParam<T> p;
  p.out_ch = out_ch;
  p.in_ch = in_ch;
  p.k = k;
  p.w.assign(std::size_t(out_ch) * in_ch * k * k, T(0));
  p.b.assign(std::size_t(out_ch), T(0));
  return p;
}

template <typename T>
std::vector<ConvParam<T>> make_layer_shapes(const NetConfig& cfg) {
  std::vector<ConvParam<T>> layers;
  layers.reserve(cfg.conv_count());
  layers.push_back(make_conv<T>(cfg.channels, cfg.in_channels, cfg.kernel));
  for (int b = 0; b < cfg.blocks; ++b) {
    layers.push_back(make_conv<T>(cfg.channels, cfg.channels, cfg.kernel));
    layers.push_back(make_conv<T>(cfg.channels, cfg.channels, cfg.kernel));
  }
  layers.push_back(make_conv<T>(cfg.in_channels, cfg.channels, cfg.kernel));
  return layers;
}

// dst[y][x] += sum of the 3x3 stencil of src weighted by wk (row-major),
// zero padding. Single pass over src per call; the three source rows stay
// cache-hot. rows_zero supplies a zeroed row for the missing top/bottom
// neighbors so the main loop is branch-free.
template <typename T>
void stencil3_accumulate(const T* src, T* dst, int h, int w, const T* wk,
                         const T* row_zero) {
  const T w00 = wk[0], w01 = wk[1], w02 = wk[2];
  const T w10 = wk[3], w11 = wk[4], w12 = wk[5];
  const T w20 = wk[6], w21 = wk[7], w22 = wk[8];
  for (int y = 0; y < h; ++y) {
    const T* s0 = y > 0 ? src + std::size_t(y - 1) * w : row_zero;
    const T* s1 = src + std::size_t(y) * w;
    const T* s2 = y + 1 < h ? src + std::size_t(y + 1) * w : row_zero;
    T* d = dst + std::size_t(y) * w;
    if (w == 1) {
      d[0] += w01 * s0[0] + w11 * s1[0] + w21 * s2[0];
      continue;
    }
    d[0] += w01 * s0[0] + w02 * s0[1] + w11 * s1[0] + w12 * s1[1] +
            w21 * s2[0] + w22 * s2[1];
    for (int x = 1; x + 1 < w; ++x) {
      d[x] += w00 * s0[x - 1] + w01 * s0[x] + w02 * s0[x + 1] +
              w10 * s1[x - 1] + w11 * s1[x] + w12 * s1[x + 1] +
              w20 * s2[x - 1] + w21 * s2[x] + w22 * s2[x + 1];
    }
    const int x = w - 1;
    d[x] += w00 * s0[x - 1] + w01 * s0[x] + w10 * s1[x - 1] + w11 * s1[x] +
            w20 * s2[x - 1] + w21 * s2[x];
  }
}

// Generic fallback for kernel sizes other than 3.
template <typename T>
void conv2d_forward_generic(const ConvParam<T>& p, const Planar<T>& in,
                            Planar<T>& out) {
  const int h = in.height, w = in.width;
  const int r = p.k / 2;
  for (int oc = 0; oc < p.out_ch; ++oc) {
    T* o = out.plane(oc);
    for (int ic = 0; ic < p.in_ch; ++ic) {
      const T* s = in.plane(ic);
      const T* wk = &p.w[(std::size_t(oc) * p.in_ch + ic) * p.k * p.k];
      for (int ky = 0; ky < p.k; ++ky) {
        for (int kx = 0; kx < p.k; ++kx) {
          const T wv = wk[ky * p.k + kx];
          const int dy = ky - r, dx = kx - r;
          const int y0 = std::max(0, -dy), y1 = std::min(h, h - dy);
          const int x0 = std::max(0, -dx), x1 = std::min(w, w - dx);
          for (int y = y0; y < y1; ++y) {
            T* orow = o + std::size_t(y) * w;
            const T* srow = s + std::size_t(y + dy) * w + dx;
            for (int x = x0; x < x1; ++x) orow[x] += wv * srow[x];
          }
        }
      }
    }
  }
}

// out = conv(p, in) + bias; shapes must be pre-set. Zero padding, stride 1.
template <typename T>
void conv2d_forward(const ConvParam<T>& p, const Planar<T>& in,
                    Planar<T>& out) {
  for (int oc = 0; oc < p.out_ch; ++oc) {
    T* o = out.plane(oc);
    std::fill(o, o + out.plane_size(), p.b[oc]);
  }
  if (p.k != 3) {
    conv2d_forward_generic(p, in, out);
    return;
  }
  const std::vector<T> row_zero(in.width, T(0));
  for (int oc = 0; oc < p.out_ch; ++oc) {
    T* o = out.plane(oc);
    for (int ic = 0; ic < p.in_ch; ++ic)
      stencil3_accumulate(in.plane(ic), o, in.height, in.width,
                          &p.w[(std::size_t(oc) * p.in_ch + ic) * 9],
                          row_zero.data());
  }
}

// grad_in += W^T * grad_out (correlation with the flipped kernel).
template <typename T>
void conv2d_backward_input(const ConvParam<T>& p, const Planar<T>& grad_out,
                           Planar<T>& grad_in) {
  const int h = grad_out.height, w = grad_out.width;
  if (p.k == 3) {
    const std::vector<T> row_zero(w, T(0));
    for (int ic = 0; ic < p.in_ch; ++ic) {
      T* gi = grad_in.plane(ic);
      for (int oc = 0; oc < p.out_ch; ++oc) {
        const T* wk = &p.w[(std::size_t(oc) * p.in_ch + ic) * 9];
        const T flipped[9] = {wk[8], wk[7], wk[6], wk[5], wk[4],
                              wk[3], wk[2], wk[1], wk[0]};
        stencil3_accumulate(grad_out.plane(oc), gi, h, w, flipped,
                            row_zero.data());
      }
    }
    return;
  }
  const int r = p.k / 2;
  for (int ic = 0; ic < p.in_ch; ++ic) {
    T* gi = grad_in.plane(ic);
    for (int oc = 0; oc < p.out_ch; ++oc) {
      const T* go = grad_out.plane(oc);
      const T* wk = &p.w[(std::size_t(oc) * p.in_ch + ic) * p.k * p.k];
      for (int ky = 0; ky < p.k; ++ky) {
        for (int kx = 0; kx < p.k; ++kx) {
          const T wv = wk[ky * p.k + kx];
          const int dy = ky - r, dx = kx - r;
          // grad_in[y][x] += wv * grad_out[y - dy][x - dx]
          const int y0 = std::max(0, dy), y1 = std::min(h, h + dy);
          const int x0 = std::max(0, dx), x1 = std::min(w, w + dx);
          for (int y = y0; y < y1; ++y) {
            T* girow = gi + std::size_t(y) * w;
            const T* gorow = go + std::size_t(y - dy) * w - dx;
            for (int x = x0; x < x1; ++x) girow[x] += wv * gorow[x];
          }
        }
      }
    }
  }
}

// grad_p += d(out)/d(params) contracted with grad_out, for the conv whose
// input was `in`. Row partials accumulate into a double before narrowing.
template <typename T>
void conv2d_backward_params(const ConvParam<T>& p, const Planar<T>& in,
                            const Planar<T>& grad_out, ConvParam<T>& grad_p) {
  const int h = in.height, w = in.width;
  const int r = p.k / 2;
  const std::vector<T> row_zero(w, T(0));
  for (int oc = 0; oc < p.out_ch; ++oc) {
    const T* go = grad_out.plane(oc);
    double bacc = 0.0;
    for (std::size_t i = 0; i < grad_out.plane_size(); ++i) bacc += double(go[i]);
    grad_p.b[oc] += T(bacc);
    for (int ic = 0; ic < p.in_ch; ++ic) {
      const T* s = in.plane(ic);
      T* gw = &grad_p.w[(std::size_t(oc) * p.in_ch + ic) * p.k * p.k];
      if (p.k == 3) {
        // one pass per channel pair: nine tap sums gathered together
        double acc[9] = {};
        for (int y = 0; y < h; ++y) {
          const T* s0 = y > 0 ? s + std::size_t(y - 1) * w : row_zero.data();
          const T* s1 = s + std::size_t(y) * w;
          const T* s2 = y + 1 < h ? s + std::size_t(y + 1) * w : row_zero.data();
          const T* g = go + std::size_t(y) * w;
          T racc[9] = {};
          for (int x = 1; x + 1 < w; ++x) {
            const T gv = g[x];
            racc[0] += gv * s0[x - 1];
            racc[1] += gv * s0[x];
            racc[2] += gv * s0[x + 1];
            racc[3] += gv * s1[x - 1];
            racc[4] += gv * s1[x];
            racc[5] += gv * s1[x + 1];
            racc[6] += gv * s2[x - 1];
            racc[7] += gv * s2[x];
            racc[8] += gv * s2[x + 1];
          }
          // column borders: x-1 below 0 and x+1 beyond w-1 are zero padding
          {
            const T gv = g[0];
            racc[1] += gv * s0[0];
            racc[4] += gv * s1[0];
            racc[7] += gv * s2[0];
            if (w > 1) {
              racc[2] += gv * s0[1];
              racc[5] += gv * s1[1];
              racc[8] += gv * s2[1];
            }
          }
          if (w > 1) {
            const T gv = g[w - 1];
            racc[0] += gv * s0[w - 2];
            racc[3] += gv * s1[w - 2];
            racc[6] += gv * s2[w - 2];
            racc[1] += gv * s0[w - 1];
            racc[4] += gv * s1[w - 1];
            racc[7] += gv * s2[w - 1];
          }
          for (int t = 0; t < 9; ++t) acc[t] += double(racc[t]);
        }
        for (int t = 0; t < 9; ++t) gw[t] += T(acc[t]);
        continue;
      }
      for (int ky = 0; ky < p.k; ++ky) {
        for (int kx = 0; kx < p.k; ++kx) {
          const int dy = ky - r, dx = kx - r;
          const int y0 = std::max(0, -dy), y1 = std::min(h, h - dy);
          const int x0 = std::max(0, -dx), x1 = std::min(w, w - dx);
          double acc = 0.0;
          for (int y = y0; y < y1; ++y) {
            const T* gorow = go + std::size_t(y) * w;
            const T* srow = s + std::size_t(y + dy) * w + dx;
            T rowacc = T(0);
            for (int x = x0; x < x1; ++x) rowacc += gorow[x] * srow[x];
            acc += double(rowacc);
          }
          gw[ky * p.k + kx] += T(acc);
        }
      }
    }
  }
}

template <typename T>
void add_inplace(Planar<T>& a, const Planar<T>& b) {
  for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += b.data[i];
}

template <typename T>
Planar<T> relu(const Planar<T>& a) {
  Planar<T> out = a;
  for (auto& v : out.data) v = v > T(0) ? v : T(0);
  return out;
}

}  // namespace

template <typename T>
NetParamsT<T> init_params(const NetConfig& cfg) {
  cfg.validate();
  NetParamsT<T> params;
  params.cfg = cfg;
  params.layers = make_layer_shapes<T>(cfg);
  SplitMix64 rng(cfg.seed);
  for (auto& layer : params.layers) {
    const double stddev =
        std::sqrt(2.0 / (double(layer.in_ch) * layer.k * layer.k));
    for (auto& v : layer.w) v = T(stddev * rng.next_normal());
    // biases stay zero
  }
  return params;
}

template <typename T>
Planar<T> forward(const NetParamsT<T>& params, const Planar<T>& x,
                  ForwardCache<T>* cache) {
  const NetConfig& cfg = params.cfg;
  if (x.channels != cfg.in_channels)
    throw std::invalid_argument("forward: input has " +
                                std::to_string(x.channels) +
                                " channels, net expects " +
                                std::to_string(cfg.in_channels));
  if (int(params.layers.size()) != cfg.conv_count())
    throw std::invalid_argument("forward: malformed parameter set");

  if (cache) {
    cache->pre_act.clear();
    cache->post_act.clear();
    cache->block_out.clear();
  }

  Planar<T> a(x.height, x.width, cfg.channels);
  conv2d_forward(params.layers[0], x, a);
  if (cache) cache->head_out = a;

  Planar<T> scratch(x.height, x.width, cfg.channels);
  for (int blk = 0; blk < cfg.blocks; ++blk) {
    const auto& c1 = params.layers[1 + 2 * blk];
    const auto& c2 = params.layers[2 + 2 * blk];
    conv2d_forward(c1, a, scratch);
    if (cache) cache->pre_act.push_back(scratch);
    Planar<T> r = relu(scratch);
    if (cache) cache->post_act.push_back(r);
    Planar<T> b2(x.height, x.width, cfg.channels);
    conv2d_forward(c2, r, b2);
    add_inplace(b2, a);  // block skip
    a = std::move(b2);
    if (cache) cache->block_out.push_back(a);
  }

  Planar<T> y(x.height, x.width, cfg.in_channels);
  conv2d_forward(params.layers[cfg.conv_count() - 1], a, y);
  add_inplace(y, x);  // global skip
  return y;
}

template <typename T>
NetGrads<T> make_zero_grads(const NetParamsT<T>& params) {
  NetGrads<T> g;
  g.layers = make_layer_shapes<T>(params.cfg);
  return g;
}

template <typename T>
void accumulate_grads(NetGrads<T>& into, const NetGrads<T>& from) {
  if (into.layers.size() != from.layers.size())
    throw std::invalid_argument("accumulate_grads: layer count mismatch");
  for (std::size_t l = 0; l < into.layers.size(); ++l) {
    auto& a = into.layers[l];
    const auto& b = from.layers[l];
    for (std::size_t i = 0; i < a.w.size(); ++i) a.w[i] += b.w[i];
    for (std::size_t i = 0; i < a.b.size(); ++i) a.b[i] += b.b[i];
  }
}

template <typename T>
Planar<T> backward(const NetParamsT<T>& params, const Planar<T>& x,
                   const ForwardCache<T>& cache, const Planar<T>& grad_out,
                   NetGrads<T>& grads) {
  const NetConfig& cfg = params.cfg;
  if (!grad_out.same_shape(x))
    throw std::invalid_argument("backward: grad_out shape mismatch");
  if (int(cache.pre_act.size()) != cfg.blocks ||
      int(cache.post_act.size()) != cfg.blocks ||
      int(cache.block_out.size()) != cfg.blocks ||
      cache.head_out.height != x.height || cache.head_out.width != x.width ||
      cache.head_out.channels != cfg.channels)
    throw std::invalid_argument(
        "backward: stale or missing activation cache for this input");
  if (int(grads.layers.size()) != cfg.conv_count())
    throw std::invalid_argument("backward: grads not sized for this net");

  // tail
  const auto& block_in = [&](int blk) -> const Planar<T>& {
    return blk == 0 ? cache.head_out : cache.block_out[blk - 1];
  };
  const Planar<T>& tail_in =
      cfg.blocks > 0 ? cache.block_out[cfg.blocks - 1] : cache.head_out;
  const int last = cfg.conv_count() - 1;
  conv2d_backward_params(params.layers[last], tail_in, grad_out,
                         grads.layers[last]);
  Planar<T> da(x.height, x.width, cfg.channels);
  conv2d_backward_input(params.layers[last], grad_out, da);

  // residual blocks, reversed
  for (int blk = cfg.blocks - 1; blk >= 0; --blk) {
    const auto& c1 = params.layers[1 + 2 * blk];
    const auto& c2 = params.layers[2 + 2 * blk];
    conv2d_backward_params(c2, cache.post_act[blk], da, grads.layers[2 + 2 * blk]);
    Planar<T> dr(x.height, x.width, cfg.channels);
    conv2d_backward_input(c2, da, dr);
    // ReLU mask from the stored pre-activation
    const Planar<T>& pre = cache.pre_act[blk];
    for (std::size_t i = 0; i < dr.data.size(); ++i)
      if (!(pre.data[i] > T(0))) dr.data[i] = T(0);
    conv2d_backward_params(c1, block_in(blk), dr, grads.layers[1 + 2 * blk]);
    Planar<T> din(x.height, x.width, cfg.channels);
    conv2d_backward_input(c1, dr, din);
    add_inplace(din, da);  // block skip path
    da = std::move(din);
  }

  // head
  conv2d_backward_params(params.layers[0], x, da, grads.layers[0]);
  Planar<T> dx(x.height, x.width, cfg.in_channels);
  conv2d_backward_input(params.layers[0], da, dx);
  add_inplace(dx, grad_out);  // global skip path
  return dx;
}

template NetParamsT<float> init_params<float>(const NetConfig&);
template NetParamsT<double> init_params<double>(const NetConfig&);
template Planar<float> forward<float>(const NetParamsT<float>&,
                                      const Planar<float>&,
                                      ForwardCache<float>*);
template Planar<double> forward<double>(const NetParamsT<double>&,
                                        const Planar<double>&,
                                        ForwardCache<double>*);
template NetGrads<float> make_zero_grads<float>(const NetParamsT<float>&);
template NetGrads<double> make_zero_grads<double>(const NetParamsT<double>&);
template void accumulate_grads<float>(NetGrads<float>&, const NetGrads<float>&);
template void accumulate_grads<double>(NetGrads<double>&,
                                       const NetGrads<double>&);
template Planar<float> backward<float>(const NetParamsT<float>&,
                                       const Planar<float>&,
                                       const ForwardCache<float>&,
                                       const Planar<float>&, NetGrads<float>&);
template Planar<double> backward<double>(const NetParamsT<double>&,
                                         const Planar<double>&,
                                         const ForwardCache<double>&,
                                         const Planar<double>&,
                                         NetGrads<double>&);

}  // namespace srkit
