// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_EVAL_GRADIENTS_HPP_
#define FILTERNET_EVAL_GRADIENTS_HPP_

#include <cstdint>

#include "filternet/diff/grad_check.hpp"
#include "filternet/model/config.hpp"

namespace filternet {

// Small shape used for whole-model gradient checks: L=16, N=3, tau=8,
// D=16, K=3, hidden width 16.
ModelConfig gradient_check_config();

// Central differences (eps 1e-5) of the MSE between the model output and a
// random target on a random batch of two windows, against the tape.
GradCheckReport check_model_gradients(const ModelConfig& config,
                                      std::uint64_t seed);

}  // namespace filternet

#endif  // FILTERNET_EVAL_GRADIENTS_HPP_
