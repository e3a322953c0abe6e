// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_EVAL_EXPORT_HPP_
#define FILTERNET_EVAL_EXPORT_HPP_

#include <cstddef>
#include <filesystem>
#include <vector>

#include "filternet/data/frame.hpp"
#include "filternet/dsp/signal.hpp"
#include "filternet/model/filternet.hpp"

namespace filternet {

// Frequency response of the learned filter: PaiFilter weights of one
// channel, or the TexFilter product of its K weight vectors (D bins).
std::vector<dsp::SpectrumRow> filter_spectrum(const FilterNet& model,
                                              std::size_t channel = 0);

// CSV per dsp::write_spectrum_csv, plus an optional SVG amplitude plot.
void filter_spectrum_export(const FilterNet& model,
                            const std::filesystem::path& csv_path,
                            const std::filesystem::path& svg_path = {},
                            std::size_t channel = 0);

// Minimal static SVG line plot of amplitude against bin.
void write_amplitude_svg(const std::vector<dsp::SpectrumRow>& rows,
                         const std::filesystem::path& path,
                         const std::string& title);

struct PredictionRequest {
  std::size_t window = 0;   // index within the range's windows
  std::size_t channel = 0;
  bool raw_scale = false;   // report in the units of the unscaled frame
};

// Writes `t,input,ground_truth,prediction` for one window of `range`:
// L input rows (empty prediction) followed by tau horizon rows (empty
// input). With raw_scale the input and ground truth are copied from `raw`
// and predictions are mapped back through `scaler`.
void prediction_export(const FilterNet& model, const data::TimeSeriesFrame& raw,
                       const data::Scaler& scaler, data::Range range,
                       const PredictionRequest& request,
                       const std::filesystem::path& path);

}  // namespace filternet

#endif  // FILTERNET_EVAL_EXPORT_HPP_
