// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_EVAL_EFFICIENCY_HPP_
#define FILTERNET_EVAL_EFFICIENCY_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "filternet/model/config.hpp"

namespace filternet {

struct EfficiencyOptions {
  std::vector<std::size_t> lookbacks = {96, 192, 384};
  std::size_t channels = 7;
  std::size_t horizon = 96;
  std::size_t windows = 2048;  // fixed for every lookback
  std::size_t batch_size = 32;
  std::size_t repeats = 3;     // the fastest epoch of each setting is kept
  FilterKind filter = FilterKind::kPaiUni;
  std::size_t ffn_hidden = 256;
  std::uint64_t seed = 7;
};

struct EfficiencyRow {
  std::size_t lookback = 0;
  std::size_t channels = 0;
  std::size_t horizon = 0;
  double epoch_seconds = 0.0;
  double filter_seconds = 0.0;  // filter block forward + backward
};

struct EfficiencyReport {
  std::vector<EfficiencyRow> rows;
  // Least-squares slope of log(filter seconds) against log(L).
  double filter_exponent = 0.0;
  // filter_seconds ratio between consecutive rows.
  std::vector<double> filter_ratios;
};

// Times one training epoch on random data at each lookback.
EfficiencyReport efficiency_probe(const EfficiencyOptions& options);

}  // namespace filternet

#endif  // FILTERNET_EVAL_EFFICIENCY_HPP_
