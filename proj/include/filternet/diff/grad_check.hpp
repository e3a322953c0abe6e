// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_DIFF_GRAD_CHECK_HPP_
#define FILTERNET_DIFF_GRAD_CHECK_HPP_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "filternet/diff/tensor.hpp"

namespace filternet {

struct ParamCheck {
  std::string name;
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  // Largest |analytic - numeric| over the group, for entries whose true
  // gradient is near zero and whose relative error is round-off dominated.
  double max_abs_error = 0.0;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::vector<ParamCheck> params;
};

// Compares analytic gradients against central differences
// (f(theta + eps) - f(theta - eps)) / (2 eps), one coordinate at a time.
//
// `loss` evaluates the scalar objective at the current parameter values.
// `gradient` must leave d(loss)/d(param) in each Param::grad; grad_check
// zeroes the buffers before calling it. Relative error per coordinate is
// |a - n| / max(|a|, |n|, 1e-8). Parameter values are restored on return.
GradCheckReport grad_check(const std::function<double()>& loss,
                           const std::function<void()>& gradient,
                           std::span<Param* const> params, double eps);

}  // namespace filternet

#endif  // FILTERNET_DIFF_GRAD_CHECK_HPP_
