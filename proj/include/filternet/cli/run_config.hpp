// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_CLI_RUN_CONFIG_HPP_
#define FILTERNET_CLI_RUN_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "filternet/data/frame.hpp"
#include "filternet/model/config.hpp"
#include "filternet/train/trainer.hpp"

namespace filternet::cli {

struct SynthConfig {
  std::string kind = "multifreq";  // multifreq, trend or multiperiod
  std::size_t steps = 10000;
  std::vector<double> periods;     // empty: {96, 24, 4} or {24, 96} for multiperiod
  std::vector<double> amplitudes;  // empty: all ones
  double slope = 0.001;
  double noise_std = 0.1;
  std::uint64_t seed = 2024;
};

struct DataConfig {
  std::string path;  // CSV input
  std::string name;  // defaults to the file stem
  data::SplitRatios split;
  SynthConfig synth;
};

struct EvalConfig {
  std::string out_dir = ".";
  std::string checkpoint = "model.fltn";
  std::string out;          // command output file (synth, predict, spectrum)
  std::string svg;          // optional spectrum plot
  std::string split = "test";  // evaluate/predict: train, val or test
  std::size_t window = 0;
  std::size_t channel = 0;
  bool raw_scale = false;
  bool grid = false;  // train: search train.batch_grid x train.lr_grid
};

struct RunConfig {
  ModelConfig model;
  TrainConfig train;
  DataConfig data;
  EvalConfig eval;
};

// Every key present in `document` overrides the matching field of `config`.
// Unknown keys throw ConfigError naming the dotted path. A top-level "run"
// object, as written into run.json, is accepted and ignored.
void apply_json(RunConfig& config, const nlohmann::json& document);

nlohmann::json to_json(const RunConfig& config);

// Parses the file at `path`; IoError if it cannot be read, ConfigError if
// it is not valid JSON.
nlohmann::json read_json_file(const std::filesystem::path& path);

// Turns "a.b.c=value" into {"a": {"b": {"c": value}}}. The value is taken
// as JSON when it parses, otherwise as a string. `train.lr` and
// `train.batch` are accepted as short forms.
nlohmann::json parse_override(const std::string& assignment);

// Recursive object merge; `patch` wins on leaves.
void merge_json(nlohmann::json& target, const nlohmann::json& patch);

// Resolves an output path against eval.out_dir unless it is absolute.
std::filesystem::path output_path(const EvalConfig& eval, const std::string& file);

}  // namespace filternet::cli

#endif  // FILTERNET_CLI_RUN_CONFIG_HPP_
