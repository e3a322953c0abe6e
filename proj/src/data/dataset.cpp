// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "filternet/data/dataset.hpp"

namespace filternet::data {

PreparedData prepare(const TimeSeriesFrame& raw, std::string name,
                     std::size_t lookback, std::size_t horizon,
                     const SplitRatios& ratios) {
  const SplitRanges split =
      chronological_split(raw.steps(), ratios, lookback + horizon);
  Scaler scaler = Scaler::fit(raw, split.train);
  TimeSeriesFrame scaled = scaler.apply(raw);
  WindowSet train(scaled, split.train, lookback, horizon);
  WindowSet val(scaled, split.val, lookback, horizon);
  WindowSet test(scaled, split.test, lookback, horizon);
  return {std::move(name), std::move(scaled), std::move(scaler), split,
          std::move(train),  std::move(val),    std::move(test)};
}

}  // namespace filternet::data
