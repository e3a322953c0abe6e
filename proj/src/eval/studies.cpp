// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "filternet/eval/studies.hpp"

#include "filternet/common/error.hpp"

namespace filternet {

TrainedRun train_and_test(const ModelConfig& model, const data::PreparedData& data,
                          const TrainConfig& train, TrainResult* result) {
  TrainResult trained = train_model(model, data.train, data.val, train);
  TrainedRun run;
  run.learning_rate = train.learning_rate;
  run.batch_size = train.batch_size;
  run.val_mse = trained.checkpoint.meta.val_loss;
  run.epochs = trained.history.size();
  run.test = evaluate(trained.checkpoint.model, data.test, data.name);
  if (result != nullptr) {
    trained.checkpoint.scaler = data.scaler;
    *result = std::move(trained);
  }
  return run;
}

GridResult tune_grid(const ModelConfig& model, const data::PreparedData& data,
                     const TrainConfig& train, const RunCallback& on_run) {
  if (train.batch_grid.empty() || train.lr_grid.empty()) {
    throw ConfigError("grid search needs non-empty train.batch_grid and train.lr_grid");
  }
  GridResult grid;
  for (std::size_t batch : train.batch_grid) {
    for (double lr : train.lr_grid) {
      TrainConfig point = train;
      point.batch_size = batch;
      point.learning_rate = lr;
      grid.runs.push_back(train_and_test(model, data, point));
      if (on_run) on_run(grid.runs.back());
      if (grid.runs.back().val_mse < grid.runs[grid.best].val_mse) {
        grid.best = grid.runs.size() - 1;
      }
    }
  }
  return grid;
}

std::vector<AblationRow> ablation_suite(const ModelConfig& base,
                                        const data::PreparedData& data,
                                        const TrainConfig& train,
                                        const RunCallback& on_run) {
  std::vector<AblationRow> rows;
  for (Variant v : {Variant::kFull, Variant::kNoNorm, Variant::kNoFilter,
                    Variant::kNoFfn}) {
    ModelConfig config = base;
    config.variant = v;
    rows.push_back({v, train_and_test(config, data, train)});
    rows.back().run.test.kind += "/" + std::string(variant_name(v));
    if (on_run) on_run(rows.back().run);
  }
  return rows;
}

ChannelComparison channel_strategy_compare(const ModelConfig& base,
                                           const data::PreparedData& data,
                                           const TrainConfig& train) {
  ModelConfig uni = base;
  uni.filter = FilterKind::kPaiUni;
  ModelConfig ind = base;
  ind.filter = FilterKind::kPaiInd;
  return {train_and_test(uni, data, train), train_and_test(ind, data, train)};
}

}  // namespace filternet
