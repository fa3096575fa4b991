#pragma once

#include <cstdint>
#include <vector>

#include "srkit/net.hpp"

namespace srkit {

// Adaptive-moment (Adam) update with bias correction. The learning rate
// starts at lr0 and is halved every halve_every steps.
struct OptimConfig {
  double lr0 = 1e-4;
  std::int64_t halve_every = 200000;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

template <typename T>
struct OptimState {
  OptimConfig cfg;
  std::vector<std::vector<T>> m_w, v_w;  // per layer, weight moments
  std::vector<std::vector<T>> m_b, v_b;  // per layer, bias moments
  std::int64_t step = 0;
  double lr = 0.0;  // current rate; halves when step crosses a boundary
};

template <typename T>
OptimState<T> make_optim_state(const NetParamsT<T>& params,
                               const OptimConfig& cfg);

// One update in place. Throws if any gradient is non-finite, naming the
// offending layer.
template <typename T>
void optim_step(NetParamsT<T>& params, const NetGrads<T>& grads,
                OptimState<T>& state);

}  // namespace srkit
