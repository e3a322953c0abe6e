// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_DSP_SIGNAL_HPP_
#define FILTERNET_DSP_SIGNAL_HPP_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "filternet/dsp/fft.hpp"

namespace filternet::dsp {

using RealSignal = std::vector<double>;

// Half spectrum of a real signal. origin_len is kept so the inverse knows
// whether the last bin is a Nyquist bin.
struct HalfSpectrum {
  std::vector<Complex> bins;
  std::size_t origin_len = 0;
};

HalfSpectrum rfft(std::span<const double> x);
RealSignal irfft(const HalfSpectrum& s, std::size_t out_len);

// y[n] = sum_m h[m] x[(n - m) mod L], evaluated directly in O(L^2).
RealSignal circular_convolve_naive(std::span<const double> h,
                                   std::span<const double> x);

// Same result through the frequency domain.
RealSignal circular_convolve_fft(std::span<const double> h,
                                 std::span<const double> x);

struct SpectrumRow {
  std::size_t bin = 0;
  double freq = 0.0;  // k / L, cycles per sample
  double amplitude = 0.0;
  double phase = 0.0;  // radians, atan2(imag, real)
};

std::vector<SpectrumRow> spectrum_profile(const HalfSpectrum& s);

// CSV with header `bin,freq,amplitude,phase`, 17 significant digits.
void write_spectrum_csv(std::ostream& out, std::span<const SpectrumRow> rows);

}  // namespace filternet::dsp

#endif  // FILTERNET_DSP_SIGNAL_HPP_
