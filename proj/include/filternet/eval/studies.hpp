// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_EVAL_STUDIES_HPP_
#define FILTERNET_EVAL_STUDIES_HPP_

#include <cstddef>
#include <functional>
#include <vector>

#include "filternet/data/dataset.hpp"
#include "filternet/eval/evaluate.hpp"
#include "filternet/train/trainer.hpp"

namespace filternet {

// One trained configuration with its validation and test metrics.
struct TrainedRun {
  double learning_rate = 0.0;
  std::size_t batch_size = 0;
  double val_mse = 0.0;
  std::size_t epochs = 0;
  EvalReport test;
};

using RunCallback = std::function<void(const TrainedRun&)>;

// Trains, keeps the best-validation parameters and scores the test split.
TrainedRun train_and_test(const ModelConfig& model, const data::PreparedData& data,
                          const TrainConfig& train, TrainResult* result = nullptr);

struct GridResult {
  std::vector<TrainedRun> runs;
  std::size_t best = 0;  // index of the lowest validation MSE
};

// Every (batch_size, learning_rate) pair of train.batch_grid x
// train.lr_grid, with identical seeds. Selection uses validation MSE only.
GridResult tune_grid(const ModelConfig& model, const data::PreparedData& data,
                     const TrainConfig& train, const RunCallback& on_run = {});

struct AblationRow {
  Variant variant;
  TrainedRun run;
};

// full, no_norm, no_filter and no_ffn trained with the same seed, data
// order and budget.
std::vector<AblationRow> ablation_suite(const ModelConfig& base,
                                        const data::PreparedData& data,
                                        const TrainConfig& train,
                                        const RunCallback& on_run = {});

struct ChannelComparison {
  TrainedRun uni;
  TrainedRun ind;
};

ChannelComparison channel_strategy_compare(const ModelConfig& base,
                                           const data::PreparedData& data,
                                           const TrainConfig& train);

}  // namespace filternet

#endif  // FILTERNET_EVAL_STUDIES_HPP_
