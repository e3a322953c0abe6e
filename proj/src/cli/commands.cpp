// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "filternet/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include "filternet/common/digest.hpp"
#include "filternet/common/error.hpp"
#include "filternet/data/dataset.hpp"
#include "filternet/data/synth.hpp"
#include "filternet/eval/evaluate.hpp"
#include "filternet/eval/export.hpp"
#include "filternet/eval/gradients.hpp"
#include "filternet/eval/studies.hpp"
#include "filternet/train/checkpoint.hpp"

namespace filternet::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Files read and written by one command, recorded in run.json.
struct RunRecord {
  std::map<std::string, std::string> inputs;
  std::map<std::string, std::string> outputs;
};

class Session {
 public:
  Session(const Invocation& inv, std::ostream& out, std::ostream& log)
      : inv_(inv), config_(inv.config), out_(out), log_(log) {}

  void run();

 private:
  void train();
  void evaluate_cmd();
  void predict();
  void synth();
  void spectrum();
  void gradcheck();
  void ablate();

  void progress(const std::string& line) {
    if (!inv_.quiet) log_ << line << '\n' << std::flush;
  }
  data::TimeSeriesFrame load_data();
  std::string dataset_name() const;
  Checkpoint load_model();
  fs::path output(const std::string& file, const std::string& fallback);
  void record_output(const fs::path& path) {
    record_.outputs[path.generic_string()] = file_digest_hex(path.string());
  }
  void write_run_json();

  const Invocation& inv_;
  RunConfig config_;
  std::ostream& out_;
  std::ostream& log_;
  RunRecord record_;
};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

data::Range split_range(const data::SplitRanges& s, const std::string& which) {
  if (which == "train") return s.train;
  if (which == "val") return s.val;
  return s.test;
}

std::string epoch_line(const EpochRecord& r) {
  return "epoch " + std::to_string(r.epoch) + " train " + fmt("%.6g", r.train_loss) +
         " val " + fmt("%.6g", r.val_loss) + " (" + fmt("%.2f", r.seconds) + " s)";
}

std::string run_line(const TrainedRun& r) {
  return "batch " + std::to_string(r.batch_size) + " lr " + fmt("%g", r.learning_rate) +
         " val " + fmt("%.6g", r.val_mse) + " test " + fmt("%.6g", r.test.mse) +
         " epochs " + std::to_string(r.epochs);
}

void Session::run() {
  static const std::map<std::string, void (Session::*)()> table = {
      {"train", &Session::train},         {"evaluate", &Session::evaluate_cmd},
      {"predict", &Session::predict},     {"synth", &Session::synth},
      {"spectrum", &Session::spectrum},   {"gradcheck", &Session::gradcheck},
      {"ablate", &Session::ablate},
  };
  const auto it = table.find(inv_.command);
  if (it == table.end()) throw Error("unknown command '" + inv_.command + "'");
  fs::create_directories(config_.eval.out_dir);
  (this->*(it->second))();
  write_run_json();
}

data::TimeSeriesFrame Session::load_data() {
  if (config_.data.path.empty()) {
    throw ConfigError("data.path is required (use --data or --set data.path=...)");
  }
  data::TimeSeriesFrame frame = data::load_csv(config_.data.path);
  record_.inputs[config_.data.path] = file_digest_hex(config_.data.path);
  return frame;
}

std::string Session::dataset_name() const {
  if (!config_.data.name.empty()) return config_.data.name;
  return fs::path(config_.data.path).stem().string();
}

Checkpoint Session::load_model() {
  const fs::path path = output_path(config_.eval, config_.eval.checkpoint);
  Checkpoint ckpt = load_checkpoint(path);
  record_.inputs[path.generic_string()] = file_digest_hex(path.string());
  if (inv_.explicit_settings.contains("model")) {
    ModelConfig expected = ckpt.model.config();
    update_from_json(expected, inv_.explicit_settings["model"]);
    require_compatible(ckpt, expected);
  }
  config_.model = ckpt.model.config();
  return ckpt;
}

fs::path Session::output(const std::string& file, const std::string& fallback) {
  return output_path(config_.eval, file.empty() ? fallback : file);
}

void Session::train() {
  const data::TimeSeriesFrame raw = load_data();
  config_.model.channels = raw.channels();
  config_.model.validate();
  config_.train.validate();
  const data::PreparedData d =
      data::prepare(raw, dataset_name(), config_.model.lookback,
                    config_.model.horizon, config_.data.split);
  progress("data " + d.name + ": N=" + std::to_string(raw.channels()) +
           " T=" + std::to_string(raw.steps()) + " windows " +
           std::to_string(d.train.size()) + "/" + std::to_string(d.val.size()) +
           "/" + std::to_string(d.test.size()));

  if (config_.eval.grid) {
    const GridResult grid = tune_grid(config_.model, d, config_.train,
                                      [&](const TrainedRun& r) { progress(run_line(r)); });
    const TrainedRun& best = grid.runs[grid.best];
    config_.train.learning_rate = best.learning_rate;
    config_.train.batch_size = best.batch_size;
    progress("best " + run_line(best));
  }
  TrainResult result = train_model(config_.model, d.train, d.val, config_.train,
                                   [&](const EpochRecord& r) { progress(epoch_line(r)); });
  result.checkpoint.scaler = d.scaler;
  const fs::path ckpt_path = output(config_.eval.checkpoint, "model.fltn");
  save_checkpoint(ckpt_path, result.checkpoint);
  record_output(ckpt_path);
  progress("checkpoint " + ckpt_path.string() + " (epoch " +
           std::to_string(result.checkpoint.meta.epoch) + ")");

  const FilterNet& model = result.checkpoint.model;
  out_ << eval_csv_header() << '\n'
       << eval_csv_row(evaluate(model, d.val, d.name + "/val")) << '\n'
       << eval_csv_row(evaluate(model, d.test, d.name + "/test")) << '\n';
}

void Session::evaluate_cmd() {
  const Checkpoint ckpt = load_model();
  const data::TimeSeriesFrame raw = load_data();
  const ModelConfig& mc = ckpt.model.config();
  if (raw.channels() != mc.channels) {
    throw DataError("data has N=" + std::to_string(raw.channels()) +
                    " channels, model expects N=" + std::to_string(mc.channels));
  }
  const data::SplitRanges split =
      data::chronological_split(raw.steps(), config_.data.split, mc.lookback + mc.horizon);
  const data::Scaler scaler =
      ckpt.scaler.empty() ? data::Scaler::fit(raw, split.train) : ckpt.scaler;
  const data::WindowSet windows(scaler.apply(raw), split_range(split, config_.eval.split),
                                mc.lookback, mc.horizon);
  const std::string name = dataset_name() + "/" + config_.eval.split;
  const EvalReport naive = evaluate_naive(windows, name);
  const EvalReport report = evaluate(ckpt.model, windows, name);
  progress(eval_text(report));
  out_ << eval_csv_header() << '\n'
       << eval_csv_row(naive) << '\n'
       << eval_csv_row(report) << '\n';
}

void Session::predict() {
  const Checkpoint ckpt = load_model();
  const data::TimeSeriesFrame raw = load_data();
  const ModelConfig& mc = ckpt.model.config();
  if (raw.channels() != mc.channels) {
    throw DataError("data has N=" + std::to_string(raw.channels()) +
                    " channels, model expects N=" + std::to_string(mc.channels));
  }
  const data::SplitRanges split =
      data::chronological_split(raw.steps(), config_.data.split, mc.lookback + mc.horizon);
  const data::Scaler scaler =
      ckpt.scaler.empty() ? data::Scaler::fit(raw, split.train) : ckpt.scaler;
  const fs::path path = output(config_.eval.out, "prediction.csv");
  const PredictionRequest request{config_.eval.window, config_.eval.channel,
                                  config_.eval.raw_scale};
  prediction_export(ckpt.model, raw, scaler, split_range(split, config_.eval.split),
                    request, path);
  record_output(path);
  progress("prediction " + path.string());
  out_ << "out,window,channel,rows\n"
       << path.generic_string() << ',' << request.window << ',' << request.channel
       << ',' << mc.lookback + mc.horizon << '\n';
}

void Session::synth() {
  const SynthConfig& s = config_.data.synth;
  data::TimeSeriesFrame frame;
  if (s.kind == "multifreq") {
    const std::vector<double> periods =
        s.periods.empty() ? std::vector<double>{96, 24, 4} : s.periods;
    const std::vector<double> amps =
        s.amplitudes.empty() ? std::vector<double>(periods.size(), 1.0) : s.amplitudes;
    frame = data::synth_multifreq(s.steps, periods, amps);
  } else if (s.kind == "trend") {
    frame = data::synth_trend_noise(s.steps, s.slope, s.noise_std, s.seed);
  } else {
    const std::vector<double> periods =
        s.periods.empty() ? std::vector<double>{24, 96} : s.periods;
    frame = data::synth_multiperiod_noise(s.steps, periods, s.noise_std, s.seed);
  }
  const fs::path path = output(config_.eval.out, "synth.csv");
  data::write_csv(frame, path);
  record_output(path);
  progress("wrote " + std::to_string(frame.steps()) + " steps to " + path.string());
  out_ << "kind,steps,out\n" << s.kind << ',' << frame.steps() << ','
       << path.generic_string() << '\n';
}

void Session::spectrum() {
  const Checkpoint ckpt = load_model();
  const fs::path csv = output(config_.eval.out, "spectrum.csv");
  const fs::path svg = config_.eval.svg.empty() ? fs::path{} : output(config_.eval.svg, "");
  filter_spectrum_export(ckpt.model, csv, svg, config_.eval.channel);
  record_output(csv);
  if (!svg.empty()) record_output(svg);
  const auto rows = filter_spectrum(ckpt.model, config_.eval.channel);
  const auto peak = std::max_element(
      rows.begin(), rows.end(),
      [](const auto& a, const auto& b) { return a.amplitude < b.amplitude; });
  out_ << "out,bins,peak_bin,peak_amplitude\n"
       << csv.generic_string() << ',' << rows.size() << ',' << peak->bin << ','
       << fmt("%.17g", peak->amplitude) << '\n';
}

// Unless the settings pin model.filter, all three filter kinds are checked.
void Session::gradcheck() {
  ModelConfig base = gradient_check_config();
  const json& settings = inv_.explicit_settings;
  if (settings.contains("model")) update_from_json(base, settings["model"]);
  config_.model = base;

  std::vector<FilterKind> kinds = {FilterKind::kPaiUni, FilterKind::kPaiInd,
                                   FilterKind::kTex};
  if (settings.contains("model") && settings["model"].contains("filter")) {
    kinds = {base.filter};
  }
  out_ << "kind,param,max_rel_error\n";
  double worst = 0.0;
  for (FilterKind kind : kinds) {
    ModelConfig mc = base;
    mc.filter = kind;
    const GradCheckReport report = check_model_gradients(mc, config_.train.seed);
    for (const ParamCheck& p : report.params) {
      out_ << filter_kind_name(kind) << ',' << p.name << ','
           << fmt("%.3e", p.max_rel_error) << '\n';
    }
    worst = std::max(worst, report.max_rel_error);
    progress(std::string(filter_kind_name(kind)) + " max relative error " +
             fmt("%.3e", report.max_rel_error));
  }
  out_ << "all,all," << fmt("%.3e", worst) << '\n';
  if (!(worst < 1e-4)) {
    throw Error("gradient check failed: max relative error " + fmt("%.3e", worst));
  }
}

void Session::ablate() {
  const data::TimeSeriesFrame raw = load_data();
  config_.model.channels = raw.channels();
  const data::PreparedData d =
      data::prepare(raw, dataset_name(), config_.model.lookback,
                    config_.model.horizon, config_.data.split);
  const auto rows = ablation_suite(config_.model, d, config_.train,
                                   [&](const TrainedRun& r) {
                                     progress(r.test.kind + " " + run_line(r));
                                   });
  out_ << eval_csv_header() << '\n';
  for (const AblationRow& row : rows) out_ << eval_csv_row(row.run.test) << '\n';
}

void Session::write_run_json() {
  json doc = to_json(config_);
  doc["run"] = {
      {"command", inv_.command},
      {"seed", config_.train.seed},
      {"versions",
       {{"filternet", std::string(kVersion)},
        {"checkpoint_format", kCheckpointVersion},
        {"noise_generator", std::string(data::kNoiseGenerator)},
        {"compiler", std::string(__VERSION__)}}},
      {"inputs", record_.inputs},
      {"outputs", record_.outputs},
  };
  const fs::path path = fs::path(config_.eval.out_dir) / "run.json";
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  f << doc.dump(2) << '\n';
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "train", "evaluate", "predict", "synth", "spectrum", "gradcheck", "ablate"};
  return names;
}

void run_command(const Invocation& invocation, std::ostream& out, std::ostream& log) {
  Session(invocation, out, log).run();
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ConfigError*>(&error) != nullptr) return kExitBadConfig;
  if (dynamic_cast<const IoError*>(&error) != nullptr ||
      dynamic_cast<const DataError*>(&error) != nullptr ||
      dynamic_cast<const CheckpointError*>(&error) != nullptr) {
    return kExitMissingInput;
  }
  return kExitFailure;
}

std::string error_line(const std::exception& error) {
  std::string kind = "internal";
  if (dynamic_cast<const ConfigError*>(&error)) kind = "config";
  else if (dynamic_cast<const IoError*>(&error)) kind = "io";
  else if (dynamic_cast<const DataError*>(&error)) kind = "data";
  else if (dynamic_cast<const CheckpointError*>(&error)) kind = "checkpoint";
  else if (dynamic_cast<const ShapeError*>(&error)) kind = "shape";
  else if (dynamic_cast<const DivergenceError*>(&error)) kind = "divergence";
  else if (dynamic_cast<const Error*>(&error)) kind = "failure";
  std::string message = error.what();
  std::replace(message.begin(), message.end(), '\n', ' ');
  return "error code=" + std::to_string(exit_code_for(error)) + " kind=" + kind +
         ": " + message;
}

}  // namespace filternet::cli
