// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_TRAIN_LOSS_HPP_
#define FILTERNET_TRAIN_LOSS_HPP_

#include "filternet/diff/tensor.hpp"

namespace filternet {

// Means over every element; shapes must match exactly.
double mse_loss(const Tensor& prediction, const Tensor& target);
double mae_metric(const Tensor& prediction, const Tensor& target);
// d mse / d prediction = 2 (prediction - target) / count.
Tensor mse_gradient(const Tensor& prediction, const Tensor& target);

}  // namespace filternet

#endif  // FILTERNET_TRAIN_LOSS_HPP_
