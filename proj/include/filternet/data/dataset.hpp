// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_DATA_DATASET_HPP_
#define FILTERNET_DATA_DATASET_HPP_

#include <string>

#include "filternet/data/frame.hpp"

namespace filternet::data {

// A frame split chronologically, z-scored with train statistics, and cut
// into windows inside each split.
struct PreparedData {
  std::string name;
  TimeSeriesFrame scaled;
  Scaler scaler;
  SplitRanges split;
  WindowSet train;
  WindowSet val;
  WindowSet test;
};

PreparedData prepare(const TimeSeriesFrame& raw, std::string name,
                     std::size_t lookback, std::size_t horizon,
                     const SplitRatios& ratios = {});

}  // namespace filternet::data

#endif  // FILTERNET_DATA_DATASET_HPP_
