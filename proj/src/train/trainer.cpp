// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "filternet/train/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "filternet/common/error.hpp"
#include "filternet/common/json_fields.hpp"
#include "filternet/common/parallel.hpp"
#include "filternet/train/adam.hpp"
#include "filternet/train/loss.hpp"

namespace filternet {

namespace {

constexpr std::size_t kEvalChunk = 128;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<Tensor> snapshot(const std::vector<Param*>& params) {
  std::vector<Tensor> out;
  out.reserve(params.size());
  for (const Param* p : params) out.push_back(p->value);
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("train.learning_rate must be > 0");
  if (batch_size == 0) throw ConfigError("train.batch_size must be >= 1");
  if (max_epochs == 0) throw ConfigError("train.max_epochs must be >= 1");
  if (!(clip_norm >= 0.0)) throw ConfigError("train.clip_norm must be >= 0");
  for (double lr : lr_grid) {
    if (!(lr > 0.0)) throw ConfigError("train.lr_grid entries must be > 0");
  }
  for (std::size_t b : batch_grid) {
    if (b == 0) throw ConfigError("train.batch_grid entries must be >= 1");
  }
}

nlohmann::json to_json(const TrainConfig& c) {
  return {{"learning_rate", c.learning_rate}, {"batch_size", c.batch_size},
          {"max_epochs", c.max_epochs},       {"patience", c.patience},
          {"seed", c.seed},                   {"clip_norm", c.clip_norm},
          {"lr_grid", c.lr_grid},             {"batch_grid", c.batch_grid}};
}

void update_from_json(TrainConfig& c, const nlohmann::json& object,
                      const std::string& path) {
  JsonFields f(object, path);
  f.read("learning_rate", c.learning_rate);
  f.read("batch_size", c.batch_size);
  f.read("max_epochs", c.max_epochs);
  f.read("patience", c.patience);
  f.read("seed", c.seed);
  f.read("clip_norm", c.clip_norm);
  f.read("lr_grid", c.lr_grid);
  f.read("batch_grid", c.batch_grid);
  f.finish();
}

ErrorSums accumulate_errors(const FilterNet& model,
                            const data::WindowSet& windows) {
  const std::size_t tau = windows.horizon();
  if (windows.channels() != model.config().channels) {
    throw DataError("data has N=" + std::to_string(windows.channels()) +
                    " channels, model expects N=" +
                    std::to_string(model.config().channels));
  }
  if (windows.lookback() != model.config().lookback ||
      tau != model.config().horizon) {
    throw DataError("windows are L=" + std::to_string(windows.lookback()) +
                    ", tau=" + std::to_string(tau) + "; model expects L=" +
                    std::to_string(model.config().lookback) + ", tau=" +
                    std::to_string(model.config().horizon));
  }
  const std::size_t n = windows.size();
  const std::size_t chunks = (n + kEvalChunk - 1) / kEvalChunk;
  std::vector<ErrorSums> partial(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t first = c * kEvalChunk;
    const std::size_t count = std::min(kEvalChunk, n - first);
    const data::WindowBatch batch = windows.batch(first, count);
    const Tensor pred = model.forward(batch.x);
    ErrorSums& s = partial[c];
    s.squared_by_step.assign(tau, 0.0);
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const double d = pred[i] - batch.y[i];
      s.squared += d * d;
      s.absolute += std::abs(d);
      s.squared_by_step[i % tau] += d * d;
    }
    s.count = pred.size();
  });
  ErrorSums total;
  total.squared_by_step.assign(tau, 0.0);
  for (const ErrorSums& s : partial) {
    total.squared += s.squared;
    total.absolute += s.absolute;
    for (std::size_t h = 0; h < tau; ++h) total.squared_by_step[h] += s.squared_by_step[h];
    total.count += s.count;
  }
  return total;
}

double validation_mse(const FilterNet& model, const data::WindowSet& windows) {
  return accumulate_errors(model, windows).mse();
}

std::vector<EpochRecord> fit(FilterNet& model, const data::WindowSet& train,
                             const data::WindowSet& val,
                             const TrainConfig& config,
                             const EpochCallback& on_epoch) {
  config.validate();
  const std::vector<Param*> params = model.parameters();
  AdamState adam = make_adam_state(params);
  std::seed_seq shuffle_seed{std::uint32_t(config.seed),
                             std::uint32_t(config.seed >> 32), 0x5eedu};
  std::mt19937_64 shuffle_rng(shuffle_seed);

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<EpochRecord> history;
  std::vector<Tensor> best = snapshot(params);
  double best_val = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto start = Clock::now();
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    EpochRecord rec;
    rec.epoch = epoch;
    double loss_sum = 0.0;
    std::size_t step = 0;
    for (std::size_t first = 0; first < order.size(); first += config.batch_size) {
      ++step;
      const std::size_t count = std::min(config.batch_size, order.size() - first);
      const data::WindowBatch batch =
          train.batch(std::span(order).subspan(first, count));
      model.zero_grad();
      Tape tape;
      const ValueId out = model.build(tape, tape.input(batch.x));
      const double loss = mse_loss(tape.value(out), batch.y);
      if (!std::isfinite(loss)) {
        throw DivergenceError("training loss is " + std::to_string(loss) +
                              " at epoch " + std::to_string(epoch) + ", step " +
                              std::to_string(step));
      }
      tape.backward(out, mse_gradient(tape.value(out), batch.y));
      rec.filter_seconds += tape.stage_seconds(kFilterStage);
      if (config.clip_norm > 0.0) clip_grad_norm(params, config.clip_norm);
      try {
        adam_step(params, adam, config.learning_rate);
      } catch (const DivergenceError& e) {
        throw DivergenceError(std::string(e.what()) + " (epoch " +
                              std::to_string(epoch) + ")");
      }
      loss_sum += loss * double(count);
    }
    rec.train_loss = loss_sum / double(order.size());
    rec.val_loss = validation_mse(model, val);
    rec.seconds = seconds_since(start);
    history.push_back(rec);
    if (on_epoch) on_epoch(rec);

    if (!std::isfinite(rec.val_loss)) {
      throw DivergenceError("validation loss is " + std::to_string(rec.val_loss) +
                            " after epoch " + std::to_string(epoch));
    }
    if (rec.val_loss < best_val) {
      best_val = rec.val_loss;
      best = snapshot(params);
      since_best = 0;
    } else {
      ++since_best;
    }
    if (since_best >= config.patience) break;
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    params[k]->value = best[k];
    params[k]->zero_grad();
  }
  return history;
}

TrainResult train_model(const ModelConfig& model_config,
                        const data::WindowSet& train,
                        const data::WindowSet& val, const TrainConfig& config,
                        const EpochCallback& on_epoch) {
  FilterNet model(model_config, config.seed);
  std::vector<EpochRecord> history = fit(model, train, val, config, on_epoch);
  const auto best = std::min_element(
      history.begin(), history.end(),
      [](const EpochRecord& a, const EpochRecord& b) { return a.val_loss < b.val_loss; });
  TrainingMetadata meta{best->epoch, best->val_loss, config.seed};
  return {Checkpoint{std::move(model), data::Scaler(), meta}, std::move(history)};
}

}  // namespace filternet
