// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_TRAIN_ADAM_HPP_
#define FILTERNET_TRAIN_ADAM_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "filternet/diff/tensor.hpp"

namespace filternet {

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t step = 0;
  std::vector<Tensor> first;   // one per parameter, same shape
  std::vector<Tensor> second;
};

AdamState make_adam_state(std::span<Param* const> params);

// One bias-corrected Adam update from each Param::grad. A non-finite
// gradient throws DivergenceError before any parameter changes.
void adam_step(std::span<Param* const> params, AdamState& state,
               double learning_rate);

// Rescales all gradients so their joint L2 norm is at most max_norm.
// Returns the norm before clipping.
double clip_grad_norm(std::span<Param* const> params, double max_norm);

}  // namespace filternet

#endif  // FILTERNET_TRAIN_ADAM_HPP_
