// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "filternet/eval/gradients.hpp"

#include <random>

#include "filternet/model/filternet.hpp"

namespace filternet {

ModelConfig gradient_check_config() {
  ModelConfig c;
  c.lookback = 16;
  c.horizon = 8;
  c.channels = 3;
  c.embed_dim = 16;
  c.num_weights = 3;
  c.ffn_hidden = 16;
  return c;
}

GradCheckReport check_model_gradients(const ModelConfig& config,
                                      std::uint64_t seed) {
  FilterNet model(config, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> dist;
  auto random_tensor = [&](Shape shape) {
    Tensor t(std::move(shape));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = dist(rng);
    return t;
  };
  const Tensor x = random_tensor({2, config.channels, config.lookback});
  const Tensor target = random_tensor({2, config.channels, config.horizon});

  auto loss = [&] {
    const Tensor y = model.forward(x);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      s += (y[i] - target[i]) * (y[i] - target[i]);
    }
    return s / double(y.size());
  };
  auto gradient = [&] {
    Tape tape;
    const ValueId out = model.build(tape, tape.input(x));
    const Tensor& y = tape.value(out);
    Tensor upstream(y.shape());
    for (std::size_t i = 0; i < y.size(); ++i) {
      upstream[i] = 2.0 * (y[i] - target[i]) / double(y.size());
    }
    tape.backward(out, upstream);
  };
  return grad_check(loss, gradient, model.parameters(), 1e-5);
}

}  // namespace filternet
