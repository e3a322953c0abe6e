// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "filternet/eval/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "filternet/common/error.hpp"

namespace filternet {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::vector<dsp::SpectrumRow> filter_spectrum(const FilterNet& model,
                                              std::size_t channel) {
  const auto [re, im] = model.effective_filter(channel);
  if (!model.config().is_tex()) {
    dsp::HalfSpectrum s{{}, model.config().lookback};
    for (std::size_t k = 0; k < re.size(); ++k) s.bins.emplace_back(re[k], im[k]);
    return dsp::spectrum_profile(s);
  }
  // TexFilter weights index a full length-D spectrum.
  std::vector<dsp::SpectrumRow> rows;
  const double d = double(re.size());
  for (std::size_t k = 0; k < re.size(); ++k) {
    rows.push_back({k, double(k) / d, std::hypot(re[k], im[k]),
                    std::atan2(im[k], re[k])});
  }
  return rows;
}

void filter_spectrum_export(const FilterNet& model,
                            const std::filesystem::path& csv_path,
                            const std::filesystem::path& svg_path,
                            std::size_t channel) {
  const std::vector<dsp::SpectrumRow> rows = filter_spectrum(model, channel);
  std::ofstream out = open_for_write(csv_path);
  dsp::write_spectrum_csv(out, rows);
  if (!out) throw IoError("failed writing '" + csv_path.string() + "'");
  if (!svg_path.empty()) {
    write_amplitude_svg(rows, svg_path,
                        describe(model.config()) + ", channel " +
                            std::to_string(channel));
  }
}

void write_amplitude_svg(const std::vector<dsp::SpectrumRow>& rows,
                         const std::filesystem::path& path,
                         const std::string& title) {
  constexpr double kWidth = 640, kHeight = 360;
  constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  double peak = 0.0;
  for (const auto& r : rows) peak = std::max(peak, r.amplitude);
  if (peak <= 0.0) peak = 1.0;
  const double last_bin = rows.size() > 1 ? double(rows.size() - 1) : 1.0;

  std::ofstream out = open_for_write(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\">"
      << title << "</text>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\""
      << kLeft + plot_w << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">frequency bin</text>\n"
      << "<text x=\"16\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << kTop + plot_h / 2
      << ")\">amplitude</text>\n"
      << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 4
      << "\" text-anchor=\"end\">" << px(peak) << "</text>\n"
      << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + plot_h + 4
      << "\" text-anchor=\"end\">0</text>\n"
      << "<text x=\"" << kLeft + plot_w << "\" y=\"" << kTop + plot_h + 16
      << "\" text-anchor=\"end\">" << rows.size() - 1 << "</text>\n"
      << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (const auto& r : rows) {
    const double x = kLeft + plot_w * double(r.bin) / last_bin;
    const double y = kTop + plot_h * (1.0 - r.amplitude / peak);
    out << px(x) << "," << px(y) << " ";
  }
  out << "\"/>\n</svg>\n";
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void prediction_export(const FilterNet& model, const data::TimeSeriesFrame& raw,
                       const data::Scaler& scaler, data::Range range,
                       const PredictionRequest& request,
                       const std::filesystem::path& path) {
  const ModelConfig& c = model.config();
  if (raw.channels() != c.channels) {
    throw DataError("data has N=" + std::to_string(raw.channels()) +
                    " channels, model expects N=" + std::to_string(c.channels));
  }
  if (request.channel >= c.channels) {
    throw DataError("channel " + std::to_string(request.channel) +
                    " out of range (N=" + std::to_string(c.channels) + ")");
  }
  const data::TimeSeriesFrame scaled = scaler.apply(raw);
  const data::WindowSet windows(scaled, range, c.lookback, c.horizon);
  if (request.window >= windows.size()) {
    throw DataError("window " + std::to_string(request.window) +
                    " out of range (" + std::to_string(windows.size()) +
                    " windows)");
  }
  const data::WindowBatch batch = windows.batch(request.window, 1);
  const Tensor pred = model.forward(batch.x);
  const std::size_t n = request.channel;
  const std::size_t start = windows.start(request.window);

  auto observed = [&](std::size_t t) {
    return request.raw_scale ? raw.at(start + t, n) : scaled.at(start + t, n);
  };
  std::ofstream out = open_for_write(path);
  out << "t,input,ground_truth,prediction\n";
  for (std::size_t t = 0; t < c.lookback; ++t) {
    out << t << "," << num(observed(t)) << "," << num(observed(t)) << ",\n";
  }
  for (std::size_t h = 0; h < c.horizon; ++h) {
    const std::size_t t = c.lookback + h;
    double p = pred[n * c.horizon + h];
    if (request.raw_scale) p = scaler.invert(p, n);
    out << t << ",," << num(observed(t)) << "," << num(p) << "\n";
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace filternet
