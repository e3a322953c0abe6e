// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "filternet/data/frame.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "filternet/common/error.hpp"

namespace filternet::data {

namespace {

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view cell = line.substr(start, comma == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : comma - start);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) {
      cell.remove_prefix(1);
    }
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) {
      cell.remove_suffix(1);
    }
    if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') {
      cell = cell.substr(1, cell.size() - 2);
    }
    cells.emplace_back(cell);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_double(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

TimeSeriesFrame load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");

  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
      if (!line.empty()) return true;
    }
    return false;
  };

  if (!next_line()) throw DataError("'" + path.string() + "' is empty");
  const std::vector<std::string> header = split_line(line);
  TimeSeriesFrame frame;
  std::ptrdiff_t date_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "date" && date_col < 0) {
      date_col = std::ptrdiff_t(c);
    } else {
      frame.channel_names.push_back(header[c]);
    }
  }
  if (frame.channel_names.empty()) {
    throw DataError("'" + path.string() + "' has no numeric columns");
  }

  while (next_line()) {
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size()) {
      throw DataError("'" + path.string() + "' line " + std::to_string(line_no) +
                      ": expected " + std::to_string(header.size()) +
                      " cells, found " + std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (std::ptrdiff_t(c) == date_col) {
        frame.timestamps.push_back(cells[c]);
        continue;
      }
      double v = 0.0;
      if (!parse_double(cells[c], v) || !std::isfinite(v)) {
        throw DataError("'" + path.string() + "' line " +
                        std::to_string(line_no) + ", column '" + header[c] +
                        "': cannot use value '" + cells[c] + "'");
      }
      frame.values.push_back(v);
    }
  }
  if (frame.values.empty()) {
    throw DataError("'" + path.string() + "' has a header but no data rows");
  }
  return frame;
}

void write_csv(const TimeSeriesFrame& frame, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  const bool dated = !frame.timestamps.empty();
  if (dated) out << "date,";
  for (std::size_t n = 0; n < frame.channels(); ++n) {
    out << (n ? "," : "") << frame.channel_names[n];
  }
  out << '\n';
  char buf[32];
  for (std::size_t t = 0; t < frame.steps(); ++t) {
    if (dated) out << frame.timestamps[t] << ',';
    for (std::size_t n = 0; n < frame.channels(); ++n) {
      std::snprintf(buf, sizeof buf, "%.17g", frame.at(t, n));
      out << (n ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

SplitRanges chronological_split(std::size_t steps, const SplitRatios& r,
                                std::size_t min_length) {
  if (!(r.train > 0.0 && r.val > 0.0 && r.test > 0.0) ||
      std::abs(r.train + r.val + r.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must be positive and sum to 1");
  }
  // The slack keeps exact products such as 0.9 * 17420 from flooring down
  // when 0.7 + 0.2 rounds below 0.9.
  const auto boundary = [&](double fraction) {
    return std::size_t(std::floor(fraction * double(steps) + 1e-9));
  };
  SplitRanges out;
  const std::size_t a = boundary(r.train);
  const std::size_t b = boundary(r.train + r.val);
  out.train = {0, a};
  out.val = {a, b};
  out.test = {b, steps};
  const std::pair<const char*, Range> parts[] = {
      {"train", out.train}, {"val", out.val}, {"test", out.test}};
  for (const auto& [name, range] : parts) {
    if (range.size() < std::max<std::size_t>(min_length, 1)) {
      throw DataError(std::string(name) + " split has " +
                      std::to_string(range.size()) + " steps, needs at least " +
                      std::to_string(std::max<std::size_t>(min_length, 1)));
    }
  }
  return out;
}

Scaler::Scaler(std::vector<double> mean, std::vector<double> stddev)
    : mean_(std::move(mean)), stddev_(std::move(stddev)) {
  if (mean_.size() != stddev_.size()) {
    throw ShapeError("scaler mean/std sizes differ");
  }
}

Scaler Scaler::fit(const TimeSeriesFrame& frame, Range range) {
  if (range.size() == 0 || range.end > frame.steps()) {
    throw DataError("scaler range is empty or outside the frame");
  }
  const std::size_t n_ch = frame.channels();
  std::vector<double> mean(n_ch, 0.0);
  std::vector<double> sd(n_ch, 0.0);
  for (std::size_t n = 0; n < n_ch; ++n) {
    double sum = 0.0;
    for (std::size_t t = range.begin; t < range.end; ++t) sum += frame.at(t, n);
    mean[n] = sum / double(range.size());
    double sq = 0.0;
    for (std::size_t t = range.begin; t < range.end; ++t) {
      const double d = frame.at(t, n) - mean[n];
      sq += d * d;
    }
    sd[n] = std::max(std::sqrt(sq / double(range.size())), kMinStd);
  }
  return Scaler(std::move(mean), std::move(sd));
}

void Scaler::check_channels(const TimeSeriesFrame& frame) const {
  if (frame.channels() != mean_.size()) {
    throw DataError("scaler fitted on " + std::to_string(mean_.size()) +
                    " channels, frame has " + std::to_string(frame.channels()));
  }
}

TimeSeriesFrame Scaler::apply(const TimeSeriesFrame& frame) const {
  check_channels(frame);
  TimeSeriesFrame out = frame;
  for (std::size_t t = 0; t < out.steps(); ++t) {
    for (std::size_t n = 0; n < out.channels(); ++n) {
      out.at(t, n) = apply(frame.at(t, n), n);
    }
  }
  return out;
}

TimeSeriesFrame Scaler::invert(const TimeSeriesFrame& frame) const {
  check_channels(frame);
  TimeSeriesFrame out = frame;
  for (std::size_t t = 0; t < out.steps(); ++t) {
    for (std::size_t n = 0; n < out.channels(); ++n) {
      out.at(t, n) = invert(frame.at(t, n), n);
    }
  }
  return out;
}

WindowSet::WindowSet(const TimeSeriesFrame& frame, Range range,
                     std::size_t lookback, std::size_t horizon,
                     std::size_t stride)
    : range_(range),
      lookback_(lookback),
      horizon_(horizon),
      stride_(stride),
      channels_(frame.channels()) {
  if (lookback == 0 || horizon == 0 || stride == 0) {
    throw ConfigError("lookback, horizon and stride must be >= 1");
  }
  if (range.end > frame.steps() || range.begin > range.end) {
    throw DataError("window range [" + std::to_string(range.begin) + ", " +
                    std::to_string(range.end) + ") lies outside the frame");
  }
  const std::size_t span = lookback + horizon;
  if (range.size() < span) {
    throw DataError("range of " + std::to_string(range.size()) +
                    " steps is shorter than lookback + horizon = " +
                    std::to_string(span));
  }
  count_ = (range.size() - span) / stride + 1;
  const std::size_t len = range.size();
  series_.resize(channels_ * len);
  for (std::size_t n = 0; n < channels_; ++n) {
    for (std::size_t t = 0; t < len; ++t) {
      series_[n * len + t] = frame.at(range.begin + t, n);
    }
  }
}

void WindowSet::copy_window(std::size_t i, double* x, double* y) const {
  if (i >= count_) {
    throw DataError("window " + std::to_string(i) + " out of range (" +
                    std::to_string(count_) + " windows)");
  }
  const std::size_t len = range_.size();
  const std::size_t off = i * stride_;
  for (std::size_t n = 0; n < channels_; ++n) {
    const double* src = series_.data() + n * len + off;
    std::copy(src, src + lookback_, x + n * lookback_);
    std::copy(src + lookback_, src + lookback_ + horizon_, y + n * horizon_);
  }
}

WindowBatch WindowSet::batch(std::span<const std::size_t> indices) const {
  const std::size_t b = indices.size();
  WindowBatch out{Tensor({b, channels_, lookback_}),
                  Tensor({b, channels_, horizon_})};
  for (std::size_t k = 0; k < b; ++k) {
    copy_window(indices[k], out.x.data().data() + k * channels_ * lookback_,
                out.y.data().data() + k * channels_ * horizon_);
  }
  return out;
}

WindowBatch WindowSet::batch(std::size_t first, std::size_t count) const {
  std::vector<std::size_t> idx(count);
  for (std::size_t k = 0; k < count; ++k) idx[k] = first + k;
  return batch(idx);
}

}  // namespace filternet::data
