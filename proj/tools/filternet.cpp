// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// filternet: train, evaluate and inspect FilterNet forecasters.

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "filternet/cli/commands.hpp"
#include "filternet/common/error.hpp"
#include "filternet/common/parallel.hpp"

namespace {

using filternet::cli::Invocation;
using nlohmann::json;

// Flag values land here; unset optionals leave the config untouched.
struct Flags {
  std::string config;
  std::vector<std::string> sets;
  std::size_t threads = 0;
  bool quiet = false;

  std::optional<std::string> data, name, checkpoint, out, out_dir, svg, split;
  std::optional<std::size_t> window, channel, lookback, horizon, steps;
  std::optional<std::string> filter, kind;
  std::optional<std::uint64_t> seed;
  std::optional<double> noise_std, slope;
  std::vector<double> periods;
  bool raw_scale = false;
  bool grid = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config,
                  "JSON config with keys model/train/data/eval; a run.json "
                  "from an earlier run is accepted");
  cmd->add_option("--set", f.sets,
                  "Override one setting, e.g. --set train.learning_rate=0.005 "
                  "(repeatable; train.lr and train.batch are short forms)");
  cmd->add_option("--threads", f.threads,
                  "Worker threads for evaluation (default: all cores)");
  cmd->add_flag("--quiet", f.quiet, "Suppress progress output on stderr");
  cmd->add_option("--out-dir", f.out_dir,
                  "Directory for run.json and relative output paths (eval.out_dir)");
}

void add_data(CLI::App* cmd, Flags& f) {
  cmd->add_option("--data", f.data, "Input CSV (data.path)");
  cmd->add_option("--name", f.name, "Dataset label in reports (data.name)");
}

void add_model_shape(CLI::App* cmd, Flags& f) {
  cmd->add_option("--lookback", f.lookback, "Lookback length L (model.lookback)");
  cmd->add_option("--horizon", f.horizon, "Forecast horizon tau (model.horizon)");
  cmd->add_option("--filter", f.filter,
                  "Filter kind: pai_uni, pai_ind or tex (model.filter)");
}

void add_checkpoint(CLI::App* cmd, Flags& f) {
  cmd->add_option("--checkpoint", f.checkpoint,
                  "Checkpoint file, relative to --out-dir (eval.checkpoint)");
}

json flag_overrides(const Flags& f) {
  json o = json::object();
  auto put = [&](const char* section, const char* key, const json& v) {
    o[section][key] = v;
  };
  if (f.data) put("data", "path", *f.data);
  if (f.name) put("data", "name", *f.name);
  if (f.checkpoint) put("eval", "checkpoint", *f.checkpoint);
  if (f.out) put("eval", "out", *f.out);
  if (f.out_dir) put("eval", "out_dir", *f.out_dir);
  if (f.svg) put("eval", "svg", *f.svg);
  if (f.split) put("eval", "split", *f.split);
  if (f.window) put("eval", "window", *f.window);
  if (f.channel) put("eval", "channel", *f.channel);
  if (f.raw_scale) put("eval", "raw_scale", true);
  if (f.grid) put("eval", "grid", true);
  if (f.lookback) put("model", "lookback", *f.lookback);
  if (f.horizon) put("model", "horizon", *f.horizon);
  if (f.filter) put("model", "filter", *f.filter);
  if (f.kind) o["data"]["synth"]["kind"] = *f.kind;
  if (f.steps) o["data"]["synth"]["steps"] = *f.steps;
  if (f.noise_std) o["data"]["synth"]["noise_std"] = *f.noise_std;
  if (f.slope) o["data"]["synth"]["slope"] = *f.slope;
  if (!f.periods.empty()) o["data"]["synth"]["periods"] = f.periods;
  if (f.seed) put("train", "seed", *f.seed);
  return o;
}

int fail(const std::exception& e) {
  std::cerr << filternet::cli::error_line(e) << std::endl;
  return filternet::cli::exit_code_for(e);
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = filternet::cli;
  CLI::App app{"FilterNet: frequency-filter forecasters for multivariate time series.\n"
               "Exit codes: 0 ok, 1 failure, 2 unknown command, 3 bad flag or "
               "config, 4 missing file or data mismatch.",
               "filternet"};
  app.set_version_flag("--version", std::string(cli::kVersion));
  app.require_subcommand(1);
  Flags f;

  CLI::App* train = app.add_subcommand("train", "Train a model and save a checkpoint");
  add_common(train, f);
  add_data(train, f);
  add_model_shape(train, f);
  add_checkpoint(train, f);
  train->add_option("--seed", f.seed, "Seed for initialization and shuffling (train.seed)");
  train->add_flag("--grid", f.grid,
                  "Search train.batch_grid x train.lr_grid and keep the best "
                  "validation run (eval.grid)");

  CLI::App* evaluate = app.add_subcommand("evaluate", "Score a checkpoint on a split");
  add_common(evaluate, f);
  add_data(evaluate, f);
  add_checkpoint(evaluate, f);
  evaluate->add_option("--split", f.split, "train, val or test (eval.split)");

  CLI::App* predict = app.add_subcommand("predict", "Export one window's forecast as CSV");
  add_common(predict, f);
  add_data(predict, f);
  add_checkpoint(predict, f);
  predict->add_option("--split", f.split, "train, val or test (eval.split)");
  predict->add_option("--window", f.window, "Window index within the split (eval.window)");
  predict->add_option("--channel", f.channel, "Channel to export (eval.channel)");
  predict->add_option("--out", f.out, "Output CSV (eval.out)");
  predict->add_flag("--raw-scale", f.raw_scale,
                    "Report values in the units of the input file (eval.raw_scale)");

  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic series as CSV");
  add_common(synth, f);
  synth->add_option("kind", f.kind, "multifreq, trend or multiperiod (data.synth.kind)");
  synth->add_option("--steps", f.steps, "Series length (data.synth.steps)");
  synth->add_option("--periods", f.periods, "Sine periods (data.synth.periods)");
  synth->add_option("--slope", f.slope, "Trend slope per step (data.synth.slope)");
  synth->add_option("--noise-std", f.noise_std,
                    "Gaussian noise standard deviation (data.synth.noise_std)");
  synth->add_option("--seed", f.seed, "Noise seed (train.seed and data.synth.seed)");
  synth->add_option("--out", f.out, "Output CSV (eval.out)");

  CLI::App* spectrum = app.add_subcommand("spectrum", "Export a filter's frequency response");
  add_common(spectrum, f);
  add_checkpoint(spectrum, f);
  spectrum->add_option("--channel", f.channel, "Channel filter to export (eval.channel)");
  spectrum->add_option("--out", f.out, "Output CSV (eval.out)");
  spectrum->add_option("--svg", f.svg, "Optional amplitude plot (eval.svg)");

  CLI::App* gradcheck = app.add_subcommand(
      "gradcheck", "Compare tape gradients with central finite differences");
  add_common(gradcheck, f);
  add_model_shape(gradcheck, f);
  gradcheck->add_option("--seed", f.seed, "Seed for weights and inputs (train.seed)");

  CLI::App* ablate = app.add_subcommand(
      "ablate", "Train full, no_norm, no_filter and no_ffn variants");
  add_common(ablate, f);
  add_data(ablate, f);
  add_model_shape(ablate, f);
  ablate->add_option("--seed", f.seed, "Seed shared by every variant (train.seed)");

  if (argc < 2) {
    std::cerr << app.help();
    return cli::kExitUnknownCommand;
  }
  const std::string first = argv[1];
  const auto& names = cli::command_names();
  if (first.empty() || (first[0] != '-' &&
                        std::find(names.begin(), names.end(), first) == names.end())) {
    std::cerr << "error code=2 kind=usage: unknown command '" << first
              << "' (expected one of train, evaluate, predict, synth, spectrum, "
                 "gradcheck, ablate)"
              << std::endl;
    return cli::kExitUnknownCommand;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string message = e.what();
    std::replace(message.begin(), message.end(), '\n', ' ');
    std::cerr << "error code=3 kind=usage: " << message << std::endl;
    return cli::kExitBadConfig;
  }

  try {
    Invocation inv;
    inv.command = app.get_subcommands().front()->get_name();
    inv.quiet = f.quiet;
    json settings = json::object();
    if (!f.config.empty()) settings = cli::read_json_file(f.config);
    if (!settings.is_object()) {
      throw filternet::ConfigError("config '" + f.config + "' must be a JSON object");
    }
    // run.json metadata describes the earlier run, not this one.
    settings.erase("run");
    for (const std::string& s : f.sets) cli::merge_json(settings, cli::parse_override(s));
    json flags = flag_overrides(f);
    if (inv.command == "synth" && f.seed) flags["data"]["synth"]["seed"] = *f.seed;
    cli::merge_json(settings, flags);
    cli::apply_json(inv.config, settings);
    inv.explicit_settings = std::move(settings);

    filternet::set_thread_count(f.threads);
    cli::run_command(inv, std::cout, std::cerr);
    std::cout << std::flush;
    return cli::kExitOk;
  } catch (const std::exception& e) {
    std::cout << std::flush;
    return fail(e);
  }
}
