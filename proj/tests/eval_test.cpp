// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "filternet/common/error.hpp"
#include "filternet/common/parallel.hpp"
#include "filternet/data/dataset.hpp"
#include "filternet/data/synth.hpp"
#include "filternet/eval/efficiency.hpp"
#include "filternet/eval/evaluate.hpp"
#include "filternet/eval/export.hpp"
#include "filternet/eval/studies.hpp"
#include "support.hpp"

using namespace filternet;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "filternet_eval_test";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

data::TimeSeriesFrame single_channel(std::vector<double> values) {
  data::TimeSeriesFrame f;
  f.channel_names = {"value"};
  f.values = std::move(values);
  return f;
}

ModelConfig small_model(std::size_t lookback, std::size_t horizon,
                        std::size_t channels = 1) {
  ModelConfig c;
  c.lookback = lookback;
  c.horizon = horizon;
  c.channels = channels;
  c.ffn_hidden = 32;
  return c;
}

TrainConfig quick_train(std::size_t epochs, double lr = 0.005) {
  TrainConfig t;
  t.max_epochs = epochs;
  t.patience = epochs;
  t.learning_rate = lr;
  t.batch_size = 16;
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------
// naive_last_value

TEST_CASE("naive baseline is exact on a constant series", "[eval][naive]") {
  const data::TimeSeriesFrame f = single_channel(std::vector<double>(40, 3.25));
  const data::WindowSet w(f, {0, 40}, 8, 4);
  const EvalReport r = evaluate_naive(w, "const");
  CHECK(r.mse == 0.0);
  CHECK(r.mae == 0.0);
  CHECK(r.windows == 40 - 8 - 4 + 1);
}

TEST_CASE("naive baseline on a line errs by the step index", "[eval][naive]") {
  std::vector<double> line(30);
  for (std::size_t t = 0; t < line.size(); ++t) line[t] = double(t);
  const data::WindowSet w(single_channel(line), {0, 30}, 5, 2);
  const EvalReport r = evaluate_naive(w, "line");
  REQUIRE(r.mse_by_step.size() == 2);
  CHECK_THAT(r.mse_by_step[0], WithinAbs(1.0, 1e-15));
  CHECK_THAT(r.mse_by_step[1], WithinAbs(4.0, 1e-15));
  CHECK_THAT(r.mae, WithinAbs(1.5, 1e-15));

  const Tensor x({1, 1, 4}, {0, 1, 2, 3});
  const Tensor p = naive_last_value(x, 3);
  CHECK(p.shape() == Shape{1, 1, 3});
  for (double v : std::vector<double>(p.data().begin(), p.data().end())) CHECK(v == 3.0);
}

TEST_CASE("naive baseline on a sinusoid matches the closed form",
          "[eval][naive]") {
  const std::size_t period = 12, lookback = 24, steps = 24 * 10;
  std::vector<double> s(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    s[t] = std::sin(2.0 * std::numbers::pi * double(t) / double(period));
  }
  const data::WindowSet w(single_channel(s), {0, steps}, lookback, period);
  const EvalReport r = evaluate_naive(w, "sine");

  // Oracle: average of (sin(theta_last) - sin(theta_last + 2 pi h / p))^2
  // over every window start and horizon step.
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t start = 0; start + lookback + period <= steps; ++start) {
    const std::size_t last = start + lookback - 1;
    const double a = std::sin(2.0 * std::numbers::pi * double(last) / double(period));
    for (std::size_t h = 1; h <= period; ++h) {
      const double b =
          std::sin(2.0 * std::numbers::pi * double(last + h) / double(period));
      acc += (a - b) * (a - b);
      ++count;
    }
  }
  CHECK(r.mse > 0.0);
  CHECK_THAT(r.mse, WithinRel(acc / double(count), 1e-12));
}

TEST_CASE("naive_last_value rejects a rank-2 input", "[eval][naive]") {
  CHECK_THROWS_AS(naive_last_value(Tensor({2, 3}), 2), ShapeError);
}

// ---------------------------------------------------------------------------
// evaluate

TEST_CASE("evaluate is deterministic and independent of thread count",
          "[eval][evaluate]") {
  std::mt19937_64 rng(testing::property_seed(11));
  data::TimeSeriesFrame f;
  f.channel_names = {"a", "b", "c"};
  f.values = testing::random_vector(3 * 600, rng);
  const data::WindowSet w(f, {0, 600}, 32, 16);
  const FilterNet model(small_model(32, 16, 3), 5);

  set_thread_count(1);
  const EvalReport a = evaluate(model, w, "rand");
  set_thread_count(4);
  const EvalReport b = evaluate(model, w, "rand");
  const EvalReport c = evaluate(model, w, "rand");
  set_thread_count(0);
  CHECK(a.mse == b.mse);
  CHECK(a.mae == b.mae);
  CHECK(b.mse == c.mse);
  CHECK(a.mse_by_step == c.mse_by_step);
  CHECK(a.windows == 600 - 32 - 16 + 1);
  CHECK(std::isfinite(a.mse));
}

TEST_CASE("evaluate on a memorized window reaches near-zero error",
          "[eval][evaluate]") {
  std::mt19937_64 rng(testing::property_seed(3));
  const data::TimeSeriesFrame f = single_channel(testing::random_vector(24, rng));
  const data::WindowSet w(f, {0, 24}, 16, 8);
  REQUIRE(w.size() == 1);
  TrainConfig t = quick_train(600, 0.01);
  t.batch_size = 1;
  t.patience = 600;
  ModelConfig c = small_model(16, 8);
  const TrainResult trained = train_model(c, w, w, t);
  const EvalReport r = evaluate(trained.checkpoint.model, w, "toy");
  CHECK(r.mse < 1e-6);
}

TEST_CASE("evaluate names both channel counts on a mismatch",
          "[eval][evaluate]") {
  data::TimeSeriesFrame f;
  f.channel_names = {"a", "b"};
  f.values.assign(2 * 100, 0.5);
  const data::WindowSet w(f, {0, 100}, 16, 8);
  const FilterNet model(small_model(16, 8, 3), 1);
  CHECK_THROWS_MATCHES(evaluate(model, w, "x"), DataError,
                       Catch::Matchers::MessageMatches(
                           ContainsSubstring("N=2") && ContainsSubstring("N=3")));
}

TEST_CASE("eval CSV row follows the header layout", "[eval][format]") {
  EvalReport r;
  r.dataset = "ETTh1";
  r.kind = "pai_uni";
  r.lookback = 96;
  r.horizon = 96;
  r.mse = 0.5;
  r.mae = 0.25;
  r.seconds = 1.5;
  r.windows = 2785;
  CHECK(eval_csv_header() == "dataset,kind,L,tau,mse,mae,seconds,windows");
  CHECK(eval_csv_row(r) == "ETTh1,pai_uni,96,96,0.5,0.25,1.500,2785");
  CHECK_THAT(eval_text(r), ContainsSubstring("mse"));
}

// ---------------------------------------------------------------------------
// studies

TEST_CASE("dropping the filter hurts the multi-frequency task",
          "[eval][ablation]") {
  // Matched budgets: early stopping off so both variants see 30 epochs.
  const data::PreparedData d =
      data::prepare(data::synth_multifreq(10000), "multifreq", 96, 96);
  const ModelConfig c;
  TrainConfig t;
  t.patience = t.max_epochs;

  ModelConfig without = c;
  without.variant = Variant::kNoFilter;
  const double full = train_and_test(c, d, t).test.mse;
  const double ablated = train_and_test(without, d, t).test.mse;
  INFO("full " << full << " no_filter " << ablated);
  CHECK(ablated >= 10.0 * full);
}

TEST_CASE("normalization is near-identity on standardized noise",
          "[eval][ablation]") {
  const data::PreparedData d = data::prepare(
      data::synth_multiperiod_noise(3000, {24, 48}, 0.1, 9), "multiperiod", 96, 24);
  const ModelConfig c = small_model(96, 24);
  ModelConfig without = c;
  without.variant = Variant::kNoNorm;
  const TrainConfig t = quick_train(10);
  const EvalReport full = train_and_test(c, d, t).test;
  const EvalReport ablated = train_and_test(without, d, t).test;
  INFO("full " << full.mse << " no_norm " << ablated.mse);
  CHECK(std::abs(ablated.mse - full.mse) < 0.1 * full.mse);
  CHECK(std::abs(ablated.mae - full.mae) < 0.1 * full.mae);
}

TEST_CASE("ablation suite covers every variant with shared settings",
          "[eval][ablation]") {
  const data::PreparedData d =
      data::prepare(data::synth_multifreq(800, {24, 8}, {1, 0.5}), "tiny", 32, 16);
  std::vector<TrainedRun> seen;
  const auto rows = ablation_suite(small_model(32, 16), d, quick_train(2),
                                   [&](const TrainedRun& r) { seen.push_back(r); });
  REQUIRE(rows.size() == 4);
  CHECK(seen.size() == 4);
  CHECK(rows[0].variant == Variant::kFull);
  CHECK(rows[1].run.test.kind == "pai_uni/no_norm");
  CHECK(rows[2].run.test.kind == "pai_uni/no_filter");
  CHECK(rows[3].run.test.kind == "pai_uni/no_ffn");
  for (const auto& r : rows) {
    CHECK(r.run.learning_rate == 0.005);
    CHECK(r.run.batch_size == 16);
    CHECK(r.run.test.windows == d.test.size());
  }
  // Repeating the full variant alone reproduces its row bitwise.
  CHECK(train_and_test(small_model(32, 16), d, quick_train(2)).test.mse ==
        rows[0].run.test.mse);
}

TEST_CASE("single-channel data makes uni and ind identical",
          "[eval][channels]") {
  const data::PreparedData d =
      data::prepare(data::synth_multifreq(800, {24, 8}, {1, 0.5}), "tiny", 32, 16);
  const ChannelComparison cmp =
      channel_strategy_compare(small_model(32, 16), d, quick_train(3));
  CHECK(cmp.uni.test.mse == cmp.ind.test.mse);
  CHECK(cmp.uni.test.mae == cmp.ind.test.mae);
  CHECK(cmp.uni.test.kind == "pai_uni");
  CHECK(cmp.ind.test.kind == "pai_ind");
}

TEST_CASE("grid search keeps the lowest validation loss", "[eval][grid]") {
  const data::PreparedData d =
      data::prepare(data::synth_multifreq(800, {24, 8}, {1, 0.5}), "tiny", 32, 16);
  TrainConfig t = quick_train(2);
  t.batch_grid = {8, 16};
  t.lr_grid = {0.01, 0.0001};
  const GridResult g = tune_grid(small_model(32, 16), d, t);
  REQUIRE(g.runs.size() == 4);
  for (const auto& r : g.runs) CHECK(g.runs[g.best].val_mse <= r.val_mse);
  CHECK(g.runs[1].batch_size == 8);
  CHECK(g.runs[1].learning_rate == 0.0001);

  t.lr_grid.clear();
  CHECK_THROWS_AS(tune_grid(small_model(32, 16), d, t), ConfigError);
}

// ---------------------------------------------------------------------------
// exports

TEST_CASE("identity filter exports a flat unit spectrum", "[eval][export]") {
  FilterNet model(small_model(20, 4), 2);
  Param& w = model.pai()->weights.re;
  for (std::size_t k = 0; k < w.value.size(); ++k) {
    w.value[k] = 1.0;
    model.pai()->weights.im.value[k] = 0.0;
  }
  const fs::path csv = scratch("flat.csv");
  const fs::path svg = scratch("flat.svg");
  filter_spectrum_export(model, csv, svg);
  const auto rows = read_csv(csv);
  REQUIRE(rows.size() == 1 + model.config().bins());
  CHECK(rows[0] == std::vector<std::string>{"bin", "freq", "amplitude", "phase"});
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK(std::stod(rows[k][2]) == 1.0);
    CHECK(std::stod(rows[k][3]) == 0.0);
  }
  std::ifstream in(svg);
  const std::string text((std::istreambuf_iterator<char>(in)), {});
  CHECK_THAT(text, ContainsSubstring("<polyline"));
}

TEST_CASE("exported spectra reload to in-memory precision", "[eval][export]") {
  for (FilterKind kind : {FilterKind::kPaiUni, FilterKind::kPaiInd, FilterKind::kTex}) {
    ModelConfig c = small_model(24, 8, 2);
    c.filter = kind;
    c.embed_dim = 12;
    const FilterNet model(c, 4);
    const auto expected = filter_spectrum(model, 1);
    const fs::path csv = scratch("reload.csv");
    filter_spectrum_export(model, csv, {}, 1);
    const auto rows = read_csv(csv);
    REQUIRE(rows.size() == expected.size() + 1);
    CHECK(expected.size() == (kind == FilterKind::kTex ? 12u : c.bins()));
    for (std::size_t k = 0; k < expected.size(); ++k) {
      const double amp = std::stod(rows[k + 1][2]);
      const double phase = std::stod(rows[k + 1][3]);
      CHECK_THAT(amp, WithinRel(expected[k].amplitude, 1e-12));
      CHECK_THAT(phase, WithinAbs(expected[k].phase, 1e-12 * std::numbers::pi));
    }
  }
}

TEST_CASE("a filter trained on one tone peaks at its bin", "[eval][export]") {
  const std::size_t lookback = 48, period = 12;
  const data::PreparedData d =
      data::prepare(data::synth_multifreq(2000, {double(period)}, {1}), "tone",
                    lookback, 24);
  const TrainResult trained =
      train_model(small_model(lookback, 24), d.train, d.val, quick_train(30));
  const auto rows = filter_spectrum(trained.checkpoint.model);
  std::vector<double> amps;
  for (const auto& r : rows) amps.push_back(r.amplitude);
  std::vector<double> sorted = amps;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double peak = amps[lookback / period];
  INFO("peak " << peak << " median " << median);
  CHECK(peak >= 2.0 * median);
}

TEST_CASE("prediction export lays out input and horizon rows",
          "[eval][export]") {
  const data::TimeSeriesFrame raw = data::synth_trend_noise(400, 0.05, 0.1, 3);
  const data::PreparedData d = data::prepare(raw, "trend", 24, 8);
  const FilterNet model(small_model(24, 8), 6);
  const fs::path path = scratch("pred.csv");
  const std::size_t window = 5;
  prediction_export(model, raw, d.scaler, d.split.test, {window, 0, true}, path);
  const auto rows = read_csv(path);
  REQUIRE(rows.size() == 1 + 24 + 8);
  CHECK(rows[0] == std::vector<std::string>{"t", "input", "ground_truth", "prediction"});
  const std::size_t start = d.split.test.begin + window;
  for (std::size_t t = 0; t < 32; ++t) {
    const auto& row = rows[t + 1];
    REQUIRE(row.size() == 4);
    CHECK(std::stod(row[2]) == raw.at(start + t, 0));
    if (t < 24) {
      CHECK(row[3].empty());
      CHECK(std::stod(row[1]) == raw.at(start + t, 0));
    } else {
      CHECK(row[1].empty());
      CHECK_FALSE(row[3].empty());
    }
  }

  // Scaled output reports the standardized series instead.
  prediction_export(model, raw, d.scaler, d.split.test, {window, 0, false}, path);
  const auto scaled = read_csv(path);
  CHECK_THAT(std::stod(scaled[1][2]),
             WithinAbs(d.scaler.apply(raw.at(start, 0), 0), 1e-12));

  CHECK_THROWS_AS(prediction_export(model, raw, d.scaler, d.split.test,
                                    {d.test.size(), 0, true}, path),
                  DataError);
}

// ---------------------------------------------------------------------------
// efficiency

TEST_CASE("efficiency probe reports one row per lookback", "[eval][efficiency]") {
  EfficiencyOptions o;
  o.lookbacks = {16, 32};
  o.channels = 2;
  o.horizon = 8;
  o.windows = 64;
  o.repeats = 1;
  o.ffn_hidden = 16;
  const EfficiencyReport r = efficiency_probe(o);
  REQUIRE(r.rows.size() == 2);
  REQUIRE(r.filter_ratios.size() == 1);
  for (const auto& row : r.rows) {
    CHECK(row.filter_seconds > 0.0);
    CHECK(row.epoch_seconds >= row.filter_seconds);
  }
  o.lookbacks = {4};
  CHECK_THROWS_AS(efficiency_probe(o), ConfigError);
}

TEST_CASE("filter time scales linearly in channels and ignores the horizon",
          "[eval][efficiency][timing]") {
  auto filter_seconds = [](std::size_t channels, std::size_t horizon) {
    EfficiencyOptions o;
    o.lookbacks = {96};
    o.channels = channels;
    o.horizon = horizon;
    o.windows = 1024;
    o.repeats = 5;
    o.ffn_hidden = 64;
    return efficiency_probe(o).rows.front().filter_seconds;
  };
  const double base = filter_seconds(4, 24);
  const double doubled = filter_seconds(8, 24);
  INFO("N=4 " << base << " N=8 " << doubled);
  CHECK(doubled / base >= 2.0 * 0.7);
  CHECK(doubled / base <= 2.0 * 1.3);

  const double longer = filter_seconds(4, 96);
  INFO("tau=24 " << base << " tau=96 " << longer);
  CHECK(longer / base >= 0.7);
  CHECK(longer / base <= 1.3);
}
