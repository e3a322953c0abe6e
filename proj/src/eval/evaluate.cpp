// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "filternet/eval/evaluate.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "filternet/common/error.hpp"
#include "filternet/train/trainer.hpp"

namespace filternet {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

EvalReport from_sums(const ErrorSums& sums, const data::WindowSet& windows) {
  EvalReport r;
  r.lookback = windows.lookback();
  r.horizon = windows.horizon();
  r.mse = sums.mse();
  r.mae = sums.mae();
  r.windows = windows.size();
  const double per_step = double(windows.size() * windows.channels());
  for (double s : sums.squared_by_step) r.mse_by_step.push_back(s / per_step);
  return r;
}

}  // namespace

EvalReport evaluate(const FilterNet& model, const data::WindowSet& windows,
                    const std::string& dataset) {
  const auto start = Clock::now();
  EvalReport r = from_sums(accumulate_errors(model, windows), windows);
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.dataset = dataset;
  r.kind = std::string(filter_kind_name(model.config().filter));
  r.config_summary = describe(model.config());
  if (!std::isfinite(r.mse) || !std::isfinite(r.mae)) {
    throw DivergenceError("evaluation produced non-finite metrics");
  }
  return r;
}

Tensor naive_last_value(const Tensor& x, std::size_t horizon) {
  if (x.rank() != 3 || x.dim(2) == 0) {
    throw ShapeError("naive_last_value expects [B, N, L], got " +
                     shape_string(x.shape()));
  }
  const std::size_t rows = x.dim(0) * x.dim(1);
  const std::size_t l = x.dim(2);
  Tensor out({x.dim(0), x.dim(1), horizon});
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t h = 0; h < horizon; ++h) out[r * horizon + h] = x[r * l + l - 1];
  }
  return out;
}

EvalReport evaluate_naive(const data::WindowSet& windows,
                          const std::string& dataset) {
  const auto start = Clock::now();
  const std::size_t tau = windows.horizon();
  ErrorSums sums;
  sums.squared_by_step.assign(tau, 0.0);
  constexpr std::size_t kChunk = 256;
  for (std::size_t first = 0; first < windows.size(); first += kChunk) {
    const std::size_t count = std::min(kChunk, windows.size() - first);
    const data::WindowBatch b = windows.batch(first, count);
    const Tensor pred = naive_last_value(b.x, tau);
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const double d = pred[i] - b.y[i];
      sums.squared += d * d;
      sums.absolute += std::abs(d);
      sums.squared_by_step[i % tau] += d * d;
    }
    sums.count += pred.size();
  }
  EvalReport r = from_sums(sums, windows);
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.dataset = dataset;
  r.kind = "naive_last_value";
  r.config_summary = "naive_last_value";
  return r;
}

std::string eval_csv_header() { return "dataset,kind,L,tau,mse,mae,seconds,windows"; }

std::string eval_csv_row(const EvalReport& r) {
  return r.dataset + "," + r.kind + "," + std::to_string(r.lookback) + "," +
         std::to_string(r.horizon) + "," + fmt(r.mse, "%.17g") + "," +
         fmt(r.mae, "%.17g") + "," + fmt(r.seconds, "%.3f") + "," +
         std::to_string(r.windows);
}

std::string eval_text(const EvalReport& r) {
  std::ostringstream out;
  out << "dataset   " << r.dataset << "\n"
      << "model     " << r.config_summary << "\n"
      << "windows   " << r.windows << "\n"
      << "mse       " << fmt(r.mse) << "\n"
      << "mae       " << fmt(r.mae) << "\n"
      << "seconds   " << fmt(r.seconds, "%.3f") << "\n"
      << "mse by horizon step:";
  for (std::size_t h = 0; h < r.mse_by_step.size(); ++h) {
    out << (h % 8 == 0 ? "\n  " : " ") << fmt(r.mse_by_step[h], "%.4f");
  }
  out << "\n";
  return out.str();
}

}  // namespace filternet
