#include "srkit/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace srkit {

template <typename T>
OptimState<T> make_optim_state(const NetParamsT<T>& params,
                               const OptimConfig& cfg) {
  OptimState<T> s;
  s.cfg = cfg;
  s.lr = cfg.lr0;
  for (const auto& layer : params.layers) {
    s.m_w.emplace_back(layer.w.size(), T(0));
    s.v_w.emplace_back(layer.w.size(), T(0));
    s.m_b.emplace_back(layer.b.size(), T(0));
    s.v_b.emplace_back(layer.b.size(), T(0));
  }
  return s;
}

namespace {

template <typename T>
void adam_update(std::vector<T>& p, const std::vector<T>& g, std::vector<T>& m,
                 std::vector<T>& v, const OptimConfig& cfg, double lr,
                 double m_corr, double v_corr) {
  const T b1 = T(cfg.beta1), b2 = T(cfg.beta2);
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = b1 * m[i] + (T(1) - b1) * g[i];
    v[i] = b2 * v[i] + (T(1) - b2) * g[i] * g[i];
    const double mhat = double(m[i]) / m_corr;
    const double vhat = double(v[i]) / v_corr;
    p[i] = T(double(p[i]) - lr * mhat / (std::sqrt(vhat) + cfg.epsilon));
  }
}

template <typename T>
bool all_finite(const std::vector<T>& xs) {
  for (const T x : xs)
    if (!std::isfinite(double(x))) return false;
  return true;
}

}  // namespace

template <typename T>
void optim_step(NetParamsT<T>& params, const NetGrads<T>& grads,
                OptimState<T>& state) {
  if (grads.layers.size() != params.layers.size())
    throw std::invalid_argument("optim_step: gradient/parameter layer mismatch");
  for (std::size_t l = 0; l < grads.layers.size(); ++l) {
    if (!all_finite(grads.layers[l].w) || !all_finite(grads.layers[l].b))
      throw std::runtime_error("optim_step: non-finite gradient in layer " +
                               layer_name(params.cfg, int(l)));
  }

  const std::int64_t t = ++state.step;
  const double m_corr = 1.0 - std::pow(state.cfg.beta1, double(t));
  const double v_corr = 1.0 - std::pow(state.cfg.beta2, double(t));
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    adam_update(params.layers[l].w, grads.layers[l].w, state.m_w[l],
                state.v_w[l], state.cfg, state.lr, m_corr, v_corr);
    adam_update(params.layers[l].b, grads.layers[l].b, state.m_b[l],
                state.v_b[l], state.cfg, state.lr, m_corr, v_corr);
  }
  if (state.cfg.halve_every > 0 && t % state.cfg.halve_every == 0)
    state.lr *= 0.5;
}

template OptimState<float> make_optim_state<float>(const NetParamsT<float>&,
                                                   const OptimConfig&);
template OptimState<double> make_optim_state<double>(const NetParamsT<double>&,
                                                     const OptimConfig&);
template void optim_step<float>(NetParamsT<float>&, const NetGrads<float>&,
                                OptimState<float>&);
template void optim_step<double>(NetParamsT<double>&, const NetGrads<double>&,
                                 OptimState<double>&);

}  // namespace srkit
