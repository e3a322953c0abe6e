// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "filternet/train/loss.hpp"

#include <cmath>

#include "filternet/common/error.hpp"

namespace filternet {

namespace {

void check_pair(const Tensor& prediction, const Tensor& target) {
  if (prediction.shape() != target.shape()) {
    throw ShapeError("loss: prediction " + shape_string(prediction.shape()) +
                     " vs target " + shape_string(target.shape()));
  }
  if (prediction.empty()) throw ShapeError("loss: empty tensors");
}

}  // namespace

double mse_loss(const Tensor& prediction, const Tensor& target) {
  check_pair(prediction, target);
  double s = 0.0;
  for (std::size_t i = 0; i < prediction.size(); ++i) {
    const double d = prediction[i] - target[i];
    s += d * d;
  }
  return s / double(prediction.size());
}

double mae_metric(const Tensor& prediction, const Tensor& target) {
  check_pair(prediction, target);
  double s = 0.0;
  for (std::size_t i = 0; i < prediction.size(); ++i) {
    s += std::abs(prediction[i] - target[i]);
  }
  return s / double(prediction.size());
}

Tensor mse_gradient(const Tensor& prediction, const Tensor& target) {
  check_pair(prediction, target);
  Tensor g(prediction.shape());
  const double scale = 2.0 / double(prediction.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = scale * (prediction[i] - target[i]);
  }
  return g;
}

}  // namespace filternet
