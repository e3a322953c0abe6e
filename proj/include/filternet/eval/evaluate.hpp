// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_EVAL_EVALUATE_HPP_
#define FILTERNET_EVAL_EVALUATE_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "filternet/data/frame.hpp"
#include "filternet/model/filternet.hpp"

namespace filternet {

struct EvalReport {
  std::string dataset;
  std::string kind;  // filter kind, or "naive_last_value"
  std::string config_summary;
  std::size_t lookback = 0;
  std::size_t horizon = 0;
  double mse = 0.0;
  double mae = 0.0;
  std::vector<double> mse_by_step;  // one entry per horizon step
  double seconds = 0.0;
  std::size_t windows = 0;
};

// Metrics over every window of `windows`. Deterministic for any thread
// count; throws DataError when N, L or tau disagree with the model.
EvalReport evaluate(const FilterNet& model, const data::WindowSet& windows,
                    const std::string& dataset);

// Repeats the last lookback value across the horizon: [B, N, L] -> [B, N, tau].
Tensor naive_last_value(const Tensor& x, std::size_t horizon);
EvalReport evaluate_naive(const data::WindowSet& windows,
                          const std::string& dataset);

// `dataset,kind,L,tau,mse,mae,seconds,windows`
std::string eval_csv_header();
std::string eval_csv_row(const EvalReport& report);
// Multi-line human-readable summary including the per-step breakdown.
std::string eval_text(const EvalReport& report);

}  // namespace filternet

#endif  // FILTERNET_EVAL_EVALUATE_HPP_
