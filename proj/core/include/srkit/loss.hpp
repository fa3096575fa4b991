#pragma once

#include <span>
#include <stdexcept>

#include "srkit/graph.hpp"
#include "srkit/image.hpp"

namespace srkit {

// Components of the combined training objective
// total = sse + lambda * glrdn. All parts are accumulated in 64-bit
// regardless of the image sample type.
struct LossValue {
  double sse = 0.0;
  double glrdn = 0.0;
  double lambda = 0.0;
  double total = 0.0;
};

namespace loss_detail {

template <typename T>
void check_pair(const Planar<T>& t, const Planar<T>& y, const GridGraph& g) {
  if (!t.same_shape(y))
    throw std::invalid_argument("loss: target/estimate shape mismatch");
  if (g.height != t.height || g.width != t.width)
    throw std::invalid_argument("loss: graph built for a different shape");
}

}  // namespace loss_detail

// Sum over channels and edges of ((t_i - t_j) - (y_i - y_j))^2.
template <typename T>
double glrdn_edge_sum(const Planar<T>& t, const Planar<T>& y,
                      const GridGraph& g) {
  loss_detail::check_pair(t, y, g);
  double acc = 0.0;
  for (int c = 0; c < t.channels; ++c) {
    const T* tp = t.plane(c);
    const T* yp = y.plane(c);
    for (const auto& e : g.edges) {
      const double dt = double(tp[e.i]) - double(tp[e.j]);
      const double dy = double(yp[e.i]) - double(yp[e.j]);
      const double d = dt - dy;
      acc += d * d;
    }
  }
  return acc;
}

// Quadratic form (t-y)^T L (t-y), per channel summed. Equals
// glrdn_edge_sum to floating tolerance; kept as the explicit-sparse route.
template <typename T>
double glrdn_quadratic(const Planar<T>& t, const Planar<T>& y,
                       const SparseMatrix& l) {
  if (!t.same_shape(y))
    throw std::invalid_argument("glrdn_quadratic: shape mismatch");
  const std::size_t n = t.plane_size();
  if (l.rows != int(n) || l.cols != int(n))
    throw std::invalid_argument("glrdn_quadratic: Laplacian dimension mismatch");
  std::vector<double> d(n), ld(n);
  double acc = 0.0;
  for (int c = 0; c < t.channels; ++c) {
    const T* tp = t.plane(c);
    const T* yp = y.plane(c);
    for (std::size_t i = 0; i < n; ++i) d[i] = double(tp[i]) - double(yp[i]);
    l.matvec(d, ld);
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) q += d[i] * ld[i];
    acc += q;
  }
  return acc;
}

// Sum of S_G over a batch of (target, estimate) pairs sharing one shape.
template <typename T>
double batched_glrdn(std::span<const Planar<T>> targets,
                     std::span<const Planar<T>> estimates,
                     const GridGraph& g) {
  if (targets.size() != estimates.size())
    throw std::invalid_argument("batched_glrdn: pair count mismatch");
  if (targets.empty())
    throw std::invalid_argument("batched_glrdn: empty batch");
  for (std::size_t m = 1; m < targets.size(); ++m)
    if (!targets[m].same_shape(targets[0]) ||
        !estimates[m].same_shape(targets[0]))
      throw std::invalid_argument("batched_glrdn: mixed shapes in batch");
  double acc = 0.0;
  for (std::size_t m = 0; m < targets.size(); ++m)
    acc += glrdn_edge_sum(targets[m], estimates[m], g);
  return acc;
}

// Plain sum of squared per-sample errors (a sum, not a mean).
template <typename T>
double sse_loss(const Planar<T>& t, const Planar<T>& y) {
  if (!t.same_shape(y))
    throw std::invalid_argument("sse_loss: shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < t.data.size(); ++i) {
    const double d = double(t.data[i]) - double(y.data[i]);
    acc += d * d;
  }
  return acc;
}

template <typename T>
LossValue total_loss(const Planar<T>& t, const Planar<T>& y, double lambda,
                     const GridGraph& g) {
  if (lambda < 0.0)
    throw std::invalid_argument("total_loss: negative lambda");
  LossValue v;
  v.sse = sse_loss(t, y);
  v.glrdn = glrdn_edge_sum(t, y, g);
  v.lambda = lambda;
  v.total = v.sse + lambda * v.glrdn;
  return v;
}

// Analytic gradient of the combined objective with respect to y:
// grad = 2 (I + lambda L)(y - t) per channel, matrix-free. When lambda is
// zero the Laplacian term is skipped entirely so a lambda=0 run is
// bit-identical to a plain-SSE one.
template <typename T>
Planar<T> total_loss_grad(const Planar<T>& t, const Planar<T>& y,
                          double lambda, const GridGraph& g) {
  loss_detail::check_pair(t, y, g);
  if (lambda < 0.0)
    throw std::invalid_argument("total_loss_grad: negative lambda");
  const std::size_t n = t.plane_size();
  Planar<T> grad(t.height, t.width, t.channels);
  std::vector<double> d(n), ld(n);
  for (int c = 0; c < t.channels; ++c) {
    const T* tp = t.plane(c);
    const T* yp = y.plane(c);
    T* gp = grad.plane(c);
    for (std::size_t i = 0; i < n; ++i) d[i] = double(yp[i]) - double(tp[i]);
    if (lambda > 0.0) {
      laplacian_apply(g, d, ld);
      for (std::size_t i = 0; i < n; ++i)
        gp[i] = T(2.0 * (d[i] + lambda * ld[i]));
    } else {
      for (std::size_t i = 0; i < n; ++i) gp[i] = T(2.0 * d[i]);
    }
  }
  return grad;
}

}  // namespace srkit
