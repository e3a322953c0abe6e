// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "filternet/cli/run_config.hpp"

#include <fstream>

#include "filternet/common/error.hpp"
#include "filternet/common/json_fields.hpp"

namespace filternet::cli {

namespace {

using nlohmann::json;

void read_split(data::SplitRatios& s, const json& object, const std::string& path) {
  JsonFields f(object, path);
  f.read("train", s.train);
  f.read("val", s.val);
  f.read("test", s.test);
  f.finish();
}

void read_synth(SynthConfig& s, const json& object, const std::string& path) {
  JsonFields f(object, path);
  f.read("kind", s.kind);
  f.read("steps", s.steps);
  f.read("periods", s.periods);
  f.read("amplitudes", s.amplitudes);
  f.read("slope", s.slope);
  f.read("noise_std", s.noise_std);
  f.read("seed", s.seed);
  f.finish();
  if (s.kind != "multifreq" && s.kind != "trend" && s.kind != "multiperiod") {
    throw ConfigError("unknown synth kind '" + s.kind +
                      "' (expected multifreq, trend or multiperiod)");
  }
}

void read_data(DataConfig& d, const json& object) {
  JsonFields f(object, "data");
  f.read("path", d.path);
  f.read("name", d.name);
  if (const json* v = f.get("split")) read_split(d.split, *v, "data.split");
  if (const json* v = f.get("synth")) read_synth(d.synth, *v, "data.synth");
  f.finish();
}

void read_eval(EvalConfig& e, const json& object) {
  JsonFields f(object, "eval");
  f.read("out_dir", e.out_dir);
  f.read("checkpoint", e.checkpoint);
  f.read("out", e.out);
  f.read("svg", e.svg);
  f.read("split", e.split);
  f.read("window", e.window);
  f.read("channel", e.channel);
  f.read("raw_scale", e.raw_scale);
  f.read("grid", e.grid);
  f.finish();
  if (e.split != "train" && e.split != "val" && e.split != "test") {
    throw ConfigError("eval.split must be train, val or test, got '" + e.split + "'");
  }
}

}  // namespace

void apply_json(RunConfig& config, const json& document) {
  JsonFields f(document, "");
  if (const json* v = f.get("model")) update_from_json(config.model, *v);
  if (const json* v = f.get("train")) update_from_json(config.train, *v);
  if (const json* v = f.get("data")) read_data(config.data, *v);
  if (const json* v = f.get("eval")) read_eval(config.eval, *v);
  f.get("run");
  f.finish();
}

json to_json(const RunConfig& c) {
  const auto& s = c.data.synth;
  return {
      {"model", to_json(c.model)},
      {"train", to_json(c.train)},
      {"data",
       {{"path", c.data.path},
        {"name", c.data.name},
        {"split",
         {{"train", c.data.split.train},
          {"val", c.data.split.val},
          {"test", c.data.split.test}}},
        {"synth",
         {{"kind", s.kind},
          {"steps", s.steps},
          {"periods", s.periods},
          {"amplitudes", s.amplitudes},
          {"slope", s.slope},
          {"noise_std", s.noise_std},
          {"seed", s.seed}}}}},
      {"eval",
       {{"out_dir", c.eval.out_dir},
        {"checkpoint", c.eval.checkpoint},
        {"out", c.eval.out},
        {"svg", c.eval.svg},
        {"split", c.eval.split},
        {"window", c.eval.window},
        {"channel", c.eval.channel},
        {"raw_scale", c.eval.raw_scale},
        {"grid", c.eval.grid}}},
  };
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " +
                      e.what());
  }
}

json parse_override(const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' must look like key.path=value");
  }
  std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  if (key == "train.lr") key = "train.learning_rate";
  if (key == "train.batch") key = "train.batch_size";

  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  std::vector<std::string> parts;
  for (std::size_t begin = 0;;) {
    const std::size_t dot = key.find('.', begin);
    parts.push_back(key.substr(begin, dot - begin));
    if (parts.back().empty()) {
      throw ConfigError("override '" + assignment + "' has an empty key segment");
    }
    if (dot == std::string::npos) break;
    begin = dot + 1;
  }
  json out = std::move(value);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    out = json{{*it, std::move(out)}};
  }
  return out;
}

void merge_json(json& target, const json& patch) {
  if (!patch.is_object() || !target.is_object()) {
    target = patch;
    return;
  }
  for (const auto& item : patch.items()) {
    if (target.contains(item.key())) {
      merge_json(target[item.key()], item.value());
    } else {
      target[item.key()] = item.value();
    }
  }
}

std::filesystem::path output_path(const EvalConfig& eval, const std::string& file) {
  const std::filesystem::path p(file);
  if (p.is_absolute()) return p;
  return std::filesystem::path(eval.out_dir) / p;
}

}  // namespace filternet::cli
