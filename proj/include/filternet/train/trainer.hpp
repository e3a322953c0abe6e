// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_TRAIN_TRAINER_HPP_
#define FILTERNET_TRAIN_TRAINER_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <json.hpp>

#include "filternet/data/frame.hpp"
#include "filternet/train/checkpoint.hpp"

namespace filternet {

struct TrainConfig {
  double learning_rate = 0.001;
  std::size_t batch_size = 16;
  std::size_t max_epochs = 30;
  std::size_t patience = 5;
  std::uint64_t seed = 2024;
  double clip_norm = 0.0;  // 0 disables clipping
  // Candidates for grid tuning on the validation split.
  std::vector<double> lr_grid = {0.01, 0.05, 0.001, 0.005, 0.0001, 0.0005};
  std::vector<std::size_t> batch_grid = {4, 8, 16, 32};

  void validate() const;
};

nlohmann::json to_json(const TrainConfig& config);
void update_from_json(TrainConfig& config, const nlohmann::json& object,
                      const std::string& path = "train");

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double seconds = 0.0;
  double filter_seconds = 0.0;  // filter block forward + backward
};

struct TrainResult {
  Checkpoint checkpoint;  // best-validation parameters
  std::vector<EpochRecord> history;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Adam on the mean squared error over shuffled mini-batches. After every
// epoch the validation MSE decides whether the parameters are kept; training
// stops once `patience` epochs pass without improvement. The model is
// initialized and shuffled from config.seed only.
TrainResult train_model(const ModelConfig& model_config,
                        const data::WindowSet& train,
                        const data::WindowSet& val, const TrainConfig& config,
                        const EpochCallback& on_epoch = {});

// Same loop on an existing model; its parameters end at the best epoch.
std::vector<EpochRecord> fit(FilterNet& model, const data::WindowSet& train,
                             const data::WindowSet& val,
                             const TrainConfig& config,
                             const EpochCallback& on_epoch = {});

// Error totals over a window set. Windows are processed in fixed chunks
// whose partial sums are added in chunk order, so the result does not
// depend on the number of threads.
struct ErrorSums {
  double squared = 0.0;
  double absolute = 0.0;
  std::vector<double> squared_by_step;  // per horizon step, summed over B, N
  std::size_t count = 0;                // elements: windows * N * tau

  double mse() const { return squared / double(count); }
  double mae() const { return absolute / double(count); }
};

ErrorSums accumulate_errors(const FilterNet& model,
                            const data::WindowSet& windows);

double validation_mse(const FilterNet& model, const data::WindowSet& windows);

}  // namespace filternet

#endif  // FILTERNET_TRAIN_TRAINER_HPP_
