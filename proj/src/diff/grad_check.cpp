// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "filternet/diff/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "filternet/common/error.hpp"

namespace filternet {

namespace {

double checked(double v, const char* where) {
  if (!std::isfinite(v)) {
    throw DivergenceError(std::string("grad_check: non-finite loss ") + where);
  }
  return v;
}

}  // namespace

GradCheckReport grad_check(const std::function<double()>& loss,
                           const std::function<void()>& gradient,
                           std::span<Param* const> params, double eps) {
  if (!(eps >= 1e-7 && eps <= 1e-3)) {
    throw ConfigError("grad_check: eps must lie in [1e-7, 1e-3]");
  }
  for (Param* p : params) p->zero_grad();
  checked(loss(), "at the base point");
  gradient();

  GradCheckReport report;
  for (Param* p : params) {
    ParamCheck check;
    check.name = p->name;
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double saved = p->value[i];
      p->value[i] = saved + eps;
      const double up = checked(loss(), "at theta + eps");
      p->value[i] = saved - eps;
      const double down = checked(loss(), "at theta - eps");
      p->value[i] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double analytic = p->grad[i];
      const double denom =
          std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      const double rel = std::abs(analytic - numeric) / denom;
      check.max_abs_error = std::max(check.max_abs_error, std::abs(analytic - numeric));
      if (i == 0 || rel > check.max_rel_error) {
        check.max_rel_error = rel;
        check.worst_index = i;
        check.analytic = analytic;
        check.numeric = numeric;
      }
    }
    report.max_rel_error = std::max(report.max_rel_error, check.max_rel_error);
    report.params.push_back(check);
  }
  return report;
}

}  // namespace filternet
