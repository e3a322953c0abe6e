// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance checks. Each criterion prints exactly one line
//   criterion <n> PASS|FAIL <title> | <measurements> | <runtime>
// and the process exits non-zero if any selected criterion fails.
//
//   acceptance                 run all criteria
//   acceptance --criterion 4   run one

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "filternet/data/dataset.hpp"
#include "filternet/data/synth.hpp"
#include "filternet/dsp/signal.hpp"
#include "filternet/eval/efficiency.hpp"
#include "filternet/eval/evaluate.hpp"
#include "filternet/eval/gradients.hpp"
#include "filternet/eval/studies.hpp"
#include "filternet/model/filternet.hpp"

namespace {

using namespace filternet;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit;  // seconds, 0 for none
  std::function<Verdict()> run;
};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------

// Each of the 1000 pairs becomes one channel of a per-channel filter, so a
// single pass through the spectral filter covers them all.
Verdict convolution_theorem() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  constexpr std::size_t kPairs = 1000;
  double worst = 0.0;
  for (std::size_t len : {4, 8, 96, 336}) {
    const std::size_t bins = len / 2 + 1;
    Tensor x({1, kPairs, len});
    Tensor re({kPairs, bins});
    Tensor im({kPairs, bins});
    std::vector<std::vector<double>> hs(kPairs), xs(kPairs);
    for (std::size_t p = 0; p < kPairs; ++p) {
      hs[p].resize(len);
      xs[p].resize(len);
      for (double& v : hs[p]) v = dist(rng);
      for (double& v : xs[p]) v = dist(rng);
      for (std::size_t n = 0; n < len; ++n) x[p * len + n] = xs[p][n];
      const dsp::HalfSpectrum s = dsp::rfft(hs[p]);
      for (std::size_t k = 0; k < bins; ++k) {
        re[p * bins + k] = s.bins[k].real();
        im[p * bins + k] = s.bins[k].imag();
      }
    }
    PaiFilterParams filter{ComplexParam("filter", re, im)};
    const Tensor y = pai_filter_forward(x, filter);
    for (std::size_t p = 0; p < kPairs; ++p) {
      const dsp::RealSignal ref = dsp::circular_convolve_naive(hs[p], xs[p]);
      for (std::size_t n = 0; n < len; ++n) {
        worst = std::max(worst, std::abs(y[p * len + n] - ref[n]));
      }
    }
  }
  return {worst < 1e-9, "max abs error " + fmt("%.2e", worst) + " (bound 1e-9)"};
}

Verdict gradient_check() {
  double worst = 0.0;
  std::string detail;
  for (FilterKind kind : {FilterKind::kPaiUni, FilterKind::kPaiInd, FilterKind::kTex}) {
    ModelConfig c = gradient_check_config();
    c.filter = kind;
    const GradCheckReport r = check_model_gradients(c, 2024);
    worst = std::max(worst, r.max_rel_error);
    detail += std::string(filter_kind_name(kind)) + " " + fmt("%.2e", r.max_rel_error) +
              " over " + std::to_string(r.params.size()) + " groups; ";
  }
  return {worst < 1e-4, detail + "bound 1e-4"};
}

Verdict norm_round_trip() {
  constexpr std::size_t kWindows = 1000, kChannels = 1, kLen = 96;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> level(-50.0, 50.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Tensor x({kWindows, kChannels, kLen});
  for (std::size_t w = 0; w < kWindows; ++w) {
    const double base = level(rng);
    // Every fourth window is near-constant, every tenth exactly constant.
    const double spread = w % 10 == 0 ? 0.0 : (w % 4 == 0 ? 1e-9 : 5.0);
    for (std::size_t t = 0; t < kLen; ++t) {
      x[w * kLen + t] = base + spread * unit(rng);
    }
  }
  const auto [z, state] = instance_norm(x, 1e-5);
  const Tensor back = inverse_norm(z, state);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::abs(back[i] - x[i]));
  }
  return {worst < 1e-9, "max abs error " + fmt("%.2e", worst) + " on " +
                            std::to_string(kWindows) + " windows (bound 1e-9)"};
}

Verdict multifreq_fit() {
  const data::PreparedData d =
      data::prepare(data::synth_multifreq(10000), "multifreq", 96, 96);
  const TrainedRun run = train_and_test(ModelConfig{}, d, TrainConfig{});
  return {run.test.mse < 1e-3, "test MSE " + fmt("%.3e", run.test.mse) +
                                   " after " + std::to_string(run.epochs) +
                                   " epochs (bound 1e-3; paper reference 2.7e-05)"};
}

Verdict noisy_robustness() {
  struct Task {
    std::string name;
    data::TimeSeriesFrame frame;
  };
  const std::vector<Task> tasks = {
      {"trend", data::synth_trend_noise(4000, 0.01, 0.1, 2024)},
      {"multiperiod", data::synth_multiperiod_noise(4000, {24, 96}, 0.1, 2024)},
  };
  bool pass = true;
  std::string detail;
  for (const Task& t : tasks) {
    const data::PreparedData d = data::prepare(t.frame, t.name, 96, 96);
    const TrainedRun run = train_and_test(ModelConfig{}, d, TrainConfig{});
    const EvalReport naive = evaluate_naive(d.test, t.name);
    const double ratio = run.test.mse / naive.mse;
    pass = pass && ratio < 0.5;
    detail += t.name + " MSE " + fmt("%.4f", run.test.mse) + " vs naive " +
              fmt("%.4f", naive.mse) + " (ratio " + fmt("%.3f", ratio) + "); ";
  }
  return {pass, detail + "bound ratio < 0.5"};
}

data::PreparedData etth1() {
  return data::prepare(data::load_csv(FILTERNET_DATA_DIR "/ETTh1.csv"), "ETTh1", 96, 96);
}

ModelConfig model_for(const data::PreparedData& d) {
  ModelConfig c;
  c.channels = d.scaled.channels();
  return c;
}

Verdict table1_reproduction() {
  const data::PreparedData d = etth1();
  TrainConfig t;
  t.lr_grid = {0.001};
  const GridResult grid = tune_grid(model_for(d), d, t, [](const TrainedRun& r) {
    std::cerr << "  grid batch " << r.batch_size << " lr " << r.learning_rate
              << " val " << r.val_mse << " test " << r.test.mse << "/" << r.test.mae
              << "\n";
  });
  const TrainedRun& best = grid.runs[grid.best];
  const bool mse_ok = std::abs(best.test.mse - 0.375) <= 0.02;
  const bool mae_ok = std::abs(best.test.mae - 0.394) <= 0.02;
  return {mse_ok && mae_ok,
          "best batch " + std::to_string(best.batch_size) + " lr " +
              fmt("%g", best.learning_rate) + ": MSE " + fmt("%.4f", best.test.mse) +
              (mse_ok ? " (in " : " (OUTSIDE ") + "0.375+-0.02), MAE " +
              fmt("%.4f", best.test.mae) + (mae_ok ? " (in " : " (OUTSIDE ") +
              "0.394+-0.02)"};
}

Verdict channel_strategy() {
  const data::PreparedData d = etth1();
  const ChannelComparison c = channel_strategy_compare(model_for(d), d, TrainConfig{});
  return {c.uni.test.mse <= c.ind.test.mse,
          "uni MSE " + fmt("%.4f", c.uni.test.mse) + " vs ind MSE " +
              fmt("%.4f", c.ind.test.mse) + " (paper 0.375 vs 0.382)"};
}

Verdict ablation_direction() {
  const data::PreparedData d = etth1();
  const auto rows = ablation_suite(model_for(d), d, TrainConfig{});
  const double full = rows.front().run.test.mse;
  bool pass = true;
  std::string detail = "full " + fmt("%.4f", full);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    pass = pass && rows[i].run.test.mse > full;
    detail += ", " + std::string(variant_name(rows[i].variant)) + " " +
              fmt("%.4f", rows[i].run.test.mse);
  }
  return {pass, detail + " (each ablation must exceed full)"};
}

Verdict efficiency_scaling() {
  EfficiencyOptions o;
  o.repeats = 5;
  const EfficiencyReport r = efficiency_probe(o);
  bool pass = true;
  std::string detail = "filter seconds";
  for (const auto& row : r.rows) {
    detail += " L=" + std::to_string(row.lookback) + ":" + fmt("%.3f", row.filter_seconds);
  }
  detail += "; ratios";
  for (double q : r.filter_ratios) {
    pass = pass && q >= 1.8 && q <= 2.6;
    detail += " " + fmt("%.2f", q);
  }
  detail += " (bound [1.8, 2.6]); exponent " + fmt("%.2f", r.filter_exponent) +
            ", consistent with L log L; the paper's O(log L) complexity claim is "
            "not asserted";
  return {pass, detail};
}

// The unit-test binaries re-key every property generator from
// FILTERNET_PROPERTY_SEED; the default run leaves it unset.
Verdict property_suite() {
  const std::vector<std::string> suites = {
      FILTERNET_TEST_DSP, FILTERNET_TEST_DIFF, FILTERNET_TEST_MODEL,
      FILTERNET_TEST_DATA, FILTERNET_TEST_TRAIN,
      std::string(FILTERNET_TEST_EVAL) + " '~[ablation]' '~[timing]'"};
  std::vector<std::uint64_t> seeds = {0};
  std::random_device device;
  for (int i = 0; i < 5; ++i) {
    seeds.push_back((std::uint64_t(device()) << 32 | device()) | 1);
  }
  bool pass = true;
  std::string detail = "seeds default";
  for (std::size_t i = 1; i < seeds.size(); ++i) detail += " " + std::to_string(seeds[i]);
  for (std::uint64_t seed : seeds) {
    for (const std::string& suite : suites) {
      std::string cmd;
      if (seed != 0) cmd = "FILTERNET_PROPERTY_SEED=" + std::to_string(seed) + " ";
      cmd += "'" + suite.substr(0, suite.find(' ')) + "'" +
             (suite.find(' ') == std::string::npos ? "" : suite.substr(suite.find(' '))) +
             " >/dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        pass = false;
        detail += "; failed: " + cmd;
      }
    }
  }
  return {pass, detail + "; " + std::to_string(suites.size()) + " suites each"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "convolution theorem, 1000 pairs at L in {4,8,96,336}", 10, convolution_theorem},
      {2, "gradient check, pai_uni/pai_ind/tex", 30, gradient_check},
      {3, "normalization round trip", 5, norm_round_trip},
      {4, "multi-frequency synthetic fit", 120, multifreq_fit},
      {5, "noisy trend / multi-period vs naive baseline", 180, noisy_robustness},
      {6, "ETTh1 96->96 PaiFilter after batch-size grid", 1800, table1_reproduction},
      {7, "ETTh1 shared filter vs per-channel filter", 0, channel_strategy},
      {8, "ETTh1 ablations each worse than full", 0, ablation_direction},
      {9, "filter-stage time per lookback doubling", 0, efficiency_scaling},
      {10, "property suite under default and 5 random seeds", 300, property_suite},
  };

  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }
  if (only < 0 || only > int(criteria.size())) {
    std::cerr << "criterion must be in 1.." << criteria.size() << "\n";
    return 2;
  }

  bool all = true;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double elapsed = seconds_since(start);
    std::string timing = fmt("%.1f s", elapsed);
    if (c.time_limit > 0) {
      timing += " (limit " + fmt("%.0f", c.time_limit) + " s)";
      if (elapsed >= c.time_limit) v.pass = false;
    }
    all = all && v.pass;
    std::cout << "criterion " << c.id << ' ' << (v.pass ? "PASS" : "FAIL") << ' '
              << c.title << " | " << v.detail << " | " << timing << std::endl;
  }
  return all ? 0 : 1;
}
