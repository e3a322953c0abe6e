// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_DATA_FRAME_HPP_
#define FILTERNET_DATA_FRAME_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "filternet/diff/tensor.hpp"

namespace filternet::data {

// Multivariate series stored time-major: values[t * channels + n].
struct TimeSeriesFrame {
  std::vector<std::string> channel_names;
  std::vector<std::string> timestamps;  // empty when the source had no date
  std::vector<double> values;

  std::size_t channels() const { return channel_names.size(); }
  std::size_t steps() const {
    return channel_names.empty() ? 0 : values.size() / channel_names.size();
  }
  double at(std::size_t t, std::size_t n) const {
    return values[t * channels() + n];
  }
  double& at(std::size_t t, std::size_t n) { return values[t * channels() + n]; }
};

// Header row required. A column named `date` becomes the timestamp column;
// every other column must hold finite numbers.
TimeSeriesFrame load_csv(const std::filesystem::path& path);
// Values are written with 17 significant digits.
void write_csv(const TimeSeriesFrame& frame, const std::filesystem::path& path);

// Half-open index range [begin, end).
struct Range {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  friend bool operator==(const Range&, const Range&) = default;
};

struct SplitRatios {
  double train = 0.7;
  double val = 0.2;
  double test = 0.1;
};

struct SplitRanges {
  Range train;
  Range val;
  Range test;
};

// Boundaries at floor(train * T) and floor((train + val) * T). Every range
// must hold at least `min_length` steps.
SplitRanges chronological_split(std::size_t steps, const SplitRatios& ratios,
                                std::size_t min_length = 1);

// Per-channel z-scoring with statistics taken from one range only.
class Scaler {
 public:
  static constexpr double kMinStd = 1e-8;

  Scaler() = default;
  Scaler(std::vector<double> mean, std::vector<double> stddev);

  static Scaler fit(const TimeSeriesFrame& frame, Range range);

  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& stddev() const { return stddev_; }
  bool empty() const { return mean_.empty(); }

  TimeSeriesFrame apply(const TimeSeriesFrame& frame) const;
  TimeSeriesFrame invert(const TimeSeriesFrame& frame) const;
  double apply(double v, std::size_t channel) const {
    return (v - mean_[channel]) / stddev_[channel];
  }
  double invert(double v, std::size_t channel) const {
    return v * stddev_[channel] + mean_[channel];
  }

 private:
  void check_channels(const TimeSeriesFrame& frame) const;

  std::vector<double> mean_;
  std::vector<double> stddev_;
};

// Lookback inputs [B, N, L] and targets [B, N, tau].
struct WindowBatch {
  Tensor x;
  Tensor y;
};

// Sliding windows confined to one range. Window i covers inputs
// [begin + i*stride, +L) and targets [begin + i*stride + L, +tau).
class WindowSet {
 public:
  WindowSet(const TimeSeriesFrame& frame, Range range, std::size_t lookback,
            std::size_t horizon, std::size_t stride = 1);

  std::size_t size() const { return count_; }
  std::size_t channels() const { return channels_; }
  std::size_t lookback() const { return lookback_; }
  std::size_t horizon() const { return horizon_; }
  Range range() const { return range_; }
  // Absolute frame index of the first input step of window i.
  std::size_t start(std::size_t i) const { return range_.begin + i * stride_; }

  WindowBatch batch(std::span<const std::size_t> indices) const;
  // Windows [first, first + count).
  WindowBatch batch(std::size_t first, std::size_t count) const;

 private:
  void copy_window(std::size_t i, double* x, double* y) const;

  Range range_;
  std::size_t lookback_;
  std::size_t horizon_;
  std::size_t stride_;
  std::size_t channels_;
  std::size_t count_;
  // Channel-major copy of the range: series_[n * range.size() + t].
  std::vector<double> series_;
};

}  // namespace filternet::data

#endif  // FILTERNET_DATA_FRAME_HPP_
