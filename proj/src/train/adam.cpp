// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "filternet/train/adam.hpp"

#include <cmath>

#include "filternet/common/error.hpp"

namespace filternet {

AdamState make_adam_state(std::span<Param* const> params) {
  AdamState state;
  for (const Param* p : params) {
    state.first.emplace_back(p->value.shape(), 0.0);
    state.second.emplace_back(p->value.shape(), 0.0);
  }
  return state;
}

void adam_step(std::span<Param* const> params, AdamState& state,
               double learning_rate) {
  if (params.size() != state.first.size()) {
    throw ShapeError("adam_step: state tracks " +
                     std::to_string(state.first.size()) + " parameters, got " +
                     std::to_string(params.size()));
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    const Param& p = *params[k];
    if (p.grad.shape() != p.value.shape() ||
        state.first[k].shape() != p.value.shape()) {
      throw ShapeError("adam_step: shape mismatch for " + p.name);
    }
    for (std::size_t i = 0; i < p.grad.size(); ++i) {
      if (!std::isfinite(p.grad[i])) {
        throw DivergenceError("non-finite gradient " + std::to_string(p.grad[i]) +
                              " in " + p.name + "[" + std::to_string(i) +
                              "] at step " + std::to_string(state.step + 1));
      }
    }
  }

  ++state.step;
  const double t = double(state.step);
  const double correct1 = 1.0 - std::pow(state.beta1, t);
  const double correct2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    Param& p = *params[k];
    Tensor& m = state.first[k];
    Tensor& v = state.second[k];
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double g = p.grad[i];
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g;
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g * g;
      const double m_hat = m[i] / correct1;
      const double v_hat = v[i] / correct2;
      p.value[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

double clip_grad_norm(std::span<Param* const> params, double max_norm) {
  double sq = 0.0;
  for (const Param* p : params) {
    for (double g : p->grad.data()) sq += g * g;
  }
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    for (Param* p : params) {
      for (double& g : p->grad.data()) g *= scale;
    }
  }
  return norm;
}

}  // namespace filternet
