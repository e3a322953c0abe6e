// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "filternet/common/error.hpp"
#include "filternet/common/parallel.hpp"
#include "filternet/data/synth.hpp"
#include "filternet/diff/grad_check.hpp"
#include "filternet/train/adam.hpp"
#include "filternet/train/checkpoint.hpp"
#include "filternet/train/loss.hpp"
#include "filternet/train/trainer.hpp"
#include "support.hpp"

using namespace filternet;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "filternet_train_test";
  fs::create_directories(dir);
  return dir / name;
}

// Scaled single-tone task split 7:2:1.
struct ToneTask {
  data::TimeSeriesFrame frame;
  data::SplitRanges split;
  data::WindowSet train;
  data::WindowSet val;
  data::WindowSet test;
};

ToneTask tone_task(std::size_t lookback, std::size_t horizon) {
  data::TimeSeriesFrame raw = data::synth_multifreq(2000, {24}, {1});
  const auto split = data::chronological_split(raw.steps(), {}, lookback + horizon);
  data::TimeSeriesFrame z = data::Scaler::fit(raw, split.train).apply(raw);
  data::WindowSet tr(z, split.train, lookback, horizon);
  data::WindowSet va(z, split.val, lookback, horizon);
  data::WindowSet te(z, split.test, lookback, horizon);
  return {std::move(z), split, std::move(tr), std::move(va), std::move(te)};
}

ModelConfig tone_model() {
  ModelConfig c;
  c.lookback = 48;
  c.horizon = 24;
  c.ffn_hidden = 32;
  return c;
}

std::vector<unsigned char> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& p, const std::vector<unsigned char>& bytes) {
  std::ofstream(p, std::ios::binary)
      .write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
}

}  // namespace

TEST_CASE("loss examples") {
  const Tensor y({2}, {1.0, 3.0});
  CHECK(mse_loss(y, y) == 0.0);
  CHECK(mae_metric(y, y) == 0.0);
  const Tensor zero({2}, 0.0);
  CHECK(mse_loss(zero, y) == 5.0);
  CHECK(mae_metric(zero, y) == 2.0);
  CHECK_THROWS_AS(mse_loss(Tensor({3}, 0.0), y), ShapeError);
}

TEST_CASE("mse gradient matches finite differences") {
  std::mt19937_64 rng(testing::property_seed(4));
  Param pred("pred", testing::random_tensor({3, 2, 5}, rng));
  const Tensor target = testing::random_tensor({3, 2, 5}, rng);
  Param* params[] = {&pred};
  const auto report = grad_check(
      [&] { return mse_loss(pred.value, target); },
      [&] {
        const Tensor g = mse_gradient(pred.value, target);
        for (std::size_t i = 0; i < g.size(); ++i) pred.grad[i] += g[i];
      },
      // Central differences are exact on a quadratic, so the widest step
      // keeps round-off (about 1e-16 * loss / eps) well under the bound.
      params, 1e-3);
  CHECK(testing::fd_agrees(report, 1e-8));
}

TEST_CASE("adam with zero gradient leaves parameters alone") {
  Param p("p", Tensor({3}, {1.0, -2.0, 0.5}));
  Param* params[] = {&p};
  AdamState state = make_adam_state(params);
  const Tensor before = p.value;
  adam_step(params, state, 0.1);
  CHECK(p.value == before);
  CHECK(state.step == 1);
}

TEST_CASE("adam first step moves each coordinate by about the learning rate") {
  Param p("p", Tensor({4}, 0.0));
  p.grad = Tensor({4}, {3.0, -0.2, 1e-3, -50.0});
  Param* params[] = {&p};
  AdamState state = make_adam_state(params);
  adam_step(params, state, 0.01);
  for (std::size_t i = 0; i < 4; ++i) {
    const double g = p.grad[i];
    CHECK_THAT(p.value[i], WithinAbs(-0.01 * g / (std::abs(g) + 1e-8), 1e-12));
  }
}

TEST_CASE("adam converges on a convex quadratic") {
  Param theta("theta", Tensor({1}, 0.0));
  Param* params[] = {&theta};
  AdamState state = make_adam_state(params);
  for (int i = 0; i < 200; ++i) {
    theta.grad[0] = 2.0 * (theta.value[0] - 3.0);
    adam_step(params, state, 0.1);
  }
  CHECK(std::abs(theta.value[0] - 3.0) < 1e-2);
}

TEST_CASE("adam rejects a non-finite gradient before updating") {
  Param a("a", Tensor({2}, 1.0));
  Param b("b", Tensor({2}, 1.0));
  a.grad = Tensor({2}, 0.5);
  b.grad = Tensor({2}, {0.1, std::nan("")});
  Param* params[] = {&a, &b};
  AdamState state = make_adam_state(params);
  CHECK_THROWS_WITH(adam_step(params, state, 0.1),
                    ContainsSubstring("b[1]"));
  CHECK(a.value == Tensor({2}, 1.0));
  CHECK(state.step == 0);
}

TEST_CASE("gradient clipping bounds the joint norm") {
  Param a("a", Tensor({2}, 0.0));
  a.grad = Tensor({2}, {3.0, 4.0});
  Param* params[] = {&a};
  CHECK(clip_grad_norm(params, 1.0) == 5.0);
  CHECK_THAT(a.grad[0], WithinAbs(0.6, 1e-15));
  CHECK_THAT(a.grad[1], WithinAbs(0.8, 1e-15));
}

TEST_CASE("patience zero runs exactly one epoch") {
  const ToneTask task = tone_task(48, 24);
  TrainConfig tc;
  tc.patience = 0;
  const auto result = train_model(tone_model(), task.train, task.val, tc);
  CHECK(result.history.size() == 1);
  CHECK(result.checkpoint.meta.epoch == 1);
}

TEST_CASE("a noiseless single tone is learned") {
  const ToneTask task = tone_task(48, 24);
  TrainConfig tc;
  tc.max_epochs = 50;
  tc.patience = 50;
  tc.learning_rate = 0.005;
  const auto result = train_model(tone_model(), task.train, task.val, tc);
  CHECK(result.history.back().train_loss < 1e-4);
  // The kept parameters are the best-validation ones.
  double best = result.history.front().val_loss;
  for (const auto& r : result.history) best = std::min(best, r.val_loss);
  const double kept = validation_mse(result.checkpoint.model, task.val);
  CHECK(kept == best);
  CHECK(kept <= result.history.back().val_loss);
  CHECK(result.checkpoint.meta.val_loss == best);
}

TEST_CASE("train loss decreases monotonically at a small learning rate") {
  const ToneTask task = tone_task(48, 24);
  TrainConfig tc;
  tc.max_epochs = 10;
  tc.patience = 10;
  tc.learning_rate = 1e-4;
  const auto result = train_model(tone_model(), task.train, task.val, tc);
  REQUIRE(result.history.size() == 10);
  for (std::size_t e = 1; e < 10; ++e) {
    CHECK(result.history[e].train_loss < result.history[e - 1].train_loss);
  }
}

TEST_CASE("training is bitwise reproducible") {
  const ToneTask task = tone_task(48, 24);
  TrainConfig tc;
  tc.max_epochs = 3;
  ModelConfig mc = tone_model();
  mc.filter = FilterKind::kTex;
  const auto a = train_model(mc, task.train, task.val, tc);
  const auto b = train_model(mc, task.train, task.val, tc);
  const auto pa = a.checkpoint.model.parameters();
  const auto pb = b.checkpoint.model.parameters();
  for (std::size_t k = 0; k < pa.size(); ++k) CHECK(pa[k]->value == pb[k]->value);
  tc.seed += 1;
  const auto c = train_model(mc, task.train, task.val, tc);
  CHECK(c.checkpoint.model.parameters()[0]->value != pa[0]->value);
}

TEST_CASE("evaluation does not depend on the thread count") {
  const ToneTask task = tone_task(48, 24);
  const FilterNet model(tone_model(), 3);
  set_thread_count(1);
  const ErrorSums one = accumulate_errors(model, task.train);
  set_thread_count(4);
  const ErrorSums four = accumulate_errors(model, task.train);
  set_thread_count(0);
  CHECK(one.squared == four.squared);
  CHECK(one.absolute == four.absolute);
  CHECK(one.squared_by_step == four.squared_by_step);
  CHECK(one.count == task.train.size() * 24);
}

TEST_CASE("checkpoint round trip reproduces forward outputs bitwise") {
  for (FilterKind kind : {FilterKind::kPaiUni, FilterKind::kPaiInd, FilterKind::kTex}) {
    ModelConfig mc;
    mc.lookback = 16;
    mc.horizon = 8;
    mc.channels = 3;
    mc.ffn_hidden = 12;
    mc.filter = kind;
    Checkpoint ckpt{FilterNet(mc, 77), data::Scaler({1.0, 2.5, -3.0}, {0.5, 1.0, 1e-8}),
                    TrainingMetadata{4, 0.125, 99}};
    const fs::path p = scratch("round.fltn");
    save_checkpoint(p, ckpt);
    const Checkpoint back = load_checkpoint(p);
    std::mt19937_64 rng(testing::property_seed(5));
    const Tensor x = testing::random_tensor({4, 3, 16}, rng);
    CHECK(back.model.forward(x) == ckpt.model.forward(x));
    CHECK(back.scaler.mean() == ckpt.scaler.mean());
    CHECK(back.scaler.stddev() == ckpt.scaler.stddev());
    CHECK(back.meta.epoch == 4);
    CHECK(back.meta.val_loss == 0.125);
    CHECK(back.meta.seed == 99);
    CHECK(to_json(back.model.config()) == to_json(mc));
    CHECK_NOTHROW(require_compatible(back, mc));
  }
}

TEST_CASE("checkpoint error paths") {
  ModelConfig mc;
  mc.lookback = 16;
  mc.horizon = 8;
  mc.ffn_hidden = 12;
  mc.filter = FilterKind::kTex;
  const fs::path p = scratch("errors.fltn");
  save_checkpoint(p, Checkpoint{FilterNet(mc, 1), data::Scaler(), {}});
  const std::vector<unsigned char> good = read_bytes(p);

  SECTION("corrupted byte") {
    auto bad = good;
    bad[bad.size() / 2] ^= 0x10;
    write_bytes(p, bad);
    CHECK_THROWS_WITH(load_checkpoint(p), ContainsSubstring("digest"));
  }
  SECTION("truncated") {
    write_bytes(p, std::vector<unsigned char>(good.begin(), good.end() - 100));
    CHECK_THROWS_WITH(load_checkpoint(p), ContainsSubstring("truncated"));
    write_bytes(p, std::vector<unsigned char>(good.begin(), good.begin() + 10));
    CHECK_THROWS_WITH(load_checkpoint(p), ContainsSubstring("truncated"));
  }
  SECTION("version mismatch") {
    auto bad = good;
    bad[4] = 9;
    write_bytes(p, bad);
    CHECK_THROWS_WITH(load_checkpoint(p), ContainsSubstring("version 9"));
  }
  SECTION("kind mismatch") {
    const Checkpoint ckpt = load_checkpoint(p);
    ModelConfig pai = mc;
    pai.filter = FilterKind::kPaiUni;
    CHECK_THROWS_WITH(require_compatible(ckpt, pai),
                      ContainsSubstring("filter kind mismatch") &&
                          ContainsSubstring("tex"));
    ModelConfig longer = mc;
    longer.horizon = 9;
    CHECK_THROWS_WITH(require_compatible(ckpt, longer), ContainsSubstring("horizon"));
  }
  SECTION("missing file") {
    CHECK_THROWS_AS(load_checkpoint(scratch("absent.fltn")), IoError);
  }
}

TEST_CASE("train config JSON rejects unknown keys") {
  TrainConfig tc;
  update_from_json(tc, {{"learning_rate", 0.005}, {"batch_size", 8}});
  CHECK(tc.learning_rate == 0.005);
  CHECK(tc.batch_size == 8);
  CHECK_THROWS_WITH(update_from_json(tc, {{"learnig_rate", 0.1}}),
                    ContainsSubstring("train.learnig_rate"));
  CHECK_THROWS_AS(update_from_json(tc, {{"batch_size", -1}}), ConfigError);
  CHECK_THROWS_AS(update_from_json(tc, {{"batch_size", "8"}}), ConfigError);
}
