// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "filternet/dsp/signal.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "filternet/common/error.hpp"

namespace filternet::dsp {

HalfSpectrum rfft(std::span<const double> x) {
  if (x.empty()) throw ShapeError("rfft: input signal is empty");
  HalfSpectrum s;
  s.origin_len = x.size();
  s.bins.resize(half_bins(x.size()));
  real_plan(x.size()).forward(x, s.bins);
  return s;
}

RealSignal irfft(const HalfSpectrum& s, std::size_t out_len) {
  if (out_len == 0 || s.bins.size() != half_bins(out_len)) {
    throw ShapeError("irfft: " + std::to_string(s.bins.size()) +
                     " bins cannot describe a signal of length " +
                     std::to_string(out_len));
  }
  RealSignal x(out_len);
  real_plan(out_len).inverse(s.bins, x);
  return x;
}

RealSignal circular_convolve_naive(std::span<const double> h,
                                   std::span<const double> x) {
  if (h.size() != x.size()) {
    throw ShapeError("circular convolution needs equal lengths (" +
                     std::to_string(h.size()) + " vs " +
                     std::to_string(x.size()) + ")");
  }
  const std::size_t n = x.size();
  RealSignal y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) acc += h[m] * x[(i + n - m) % n];
    y[i] = acc;
  }
  return y;
}

RealSignal circular_convolve_fft(std::span<const double> h,
                                 std::span<const double> x) {
  if (h.size() != x.size()) {
    throw ShapeError("circular convolution needs equal lengths");
  }
  HalfSpectrum hs = rfft(h);
  const HalfSpectrum xs = rfft(x);
  for (std::size_t k = 0; k < hs.bins.size(); ++k) hs.bins[k] *= xs.bins[k];
  return irfft(hs, x.size());
}

std::vector<SpectrumRow> spectrum_profile(const HalfSpectrum& s) {
  std::vector<SpectrumRow> rows;
  rows.reserve(s.bins.size());
  const double len = s.origin_len > 0 ? double(s.origin_len) : 1.0;
  for (std::size_t k = 0; k < s.bins.size(); ++k) {
    const Complex c = s.bins[k];
    rows.push_back({k, double(k) / len, std::abs(c),
                    std::atan2(c.imag(), c.real())});
  }
  return rows;
}

void write_spectrum_csv(std::ostream& out, std::span<const SpectrumRow> rows) {
  out << "bin,freq,amplitude,phase\n";
  char buf[160];
  for (const SpectrumRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", r.bin, r.freq,
                  r.amplitude, r.phase);
    out << buf;
  }
}

}  // namespace filternet::dsp
