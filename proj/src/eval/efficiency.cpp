// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "filternet/eval/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "filternet/common/error.hpp"
#include "filternet/data/frame.hpp"
#include "filternet/train/trainer.hpp"

namespace filternet {

EfficiencyReport efficiency_probe(const EfficiencyOptions& o) {
  if (o.lookbacks.empty() || o.windows == 0 || o.repeats == 0) {
    throw ConfigError("efficiency probe needs lookbacks, windows and repeats");
  }
  EfficiencyReport report;
  for (std::size_t l : o.lookbacks) {
    if (l < 8) throw ConfigError("efficiency probe lookbacks must be >= 8");
    data::TimeSeriesFrame frame;
    for (std::size_t n = 0; n < o.channels; ++n) {
      frame.channel_names.push_back("c" + std::to_string(n));
    }
    const std::size_t steps = o.windows + l + o.horizon - 1;
    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> dist;
    frame.values.resize(steps * o.channels);
    for (double& v : frame.values) v = dist(rng);
    const data::WindowSet train(frame, {0, steps}, l, o.horizon);
    const data::WindowSet val(frame, {0, l + o.horizon}, l, o.horizon);

    ModelConfig mc;
    mc.lookback = l;
    mc.horizon = o.horizon;
    mc.channels = o.channels;
    mc.filter = o.filter;
    mc.ffn_hidden = o.ffn_hidden;
    TrainConfig tc;
    tc.max_epochs = 1;
    tc.batch_size = o.batch_size;
    tc.seed = o.seed;

    EfficiencyRow row{l, o.channels, o.horizon,
                      std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity()};
    for (std::size_t r = 0; r < o.repeats; ++r) {
      FilterNet model(mc, o.seed);
      const EpochRecord rec = fit(model, train, val, tc).front();
      row.epoch_seconds = std::min(row.epoch_seconds, rec.seconds);
      row.filter_seconds = std::min(row.filter_seconds, rec.filter_seconds);
    }
    report.rows.push_back(row);
  }

  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    report.filter_ratios.push_back(report.rows[i].filter_seconds /
                                   report.rows[i - 1].filter_seconds);
  }
  if (report.rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(report.rows.size());
    for (const EfficiencyRow& r : report.rows) {
      const double x = std::log(double(r.lookback));
      const double y = std::log(r.filter_seconds);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    report.filter_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return report;
}

}  // namespace filternet
