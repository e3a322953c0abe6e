// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_DSP_FFT_HPP_
#define FILTERNET_DSP_FFT_HPP_

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace filternet::dsp {

using Complex = std::complex<double>;

// Number of half-spectrum bins for a real signal of length n.
constexpr std::size_t half_bins(std::size_t n) { return n / 2 + 1; }

// Complex DFT of arbitrary length. Lengths whose prime factors are all small
// use a mixed-radix Cooley-Tukey recursion; anything else goes through
// Bluestein's chirp-z algorithm on a power-of-two plan. Both are O(n log n).
//
// Forward is unnormalized: out[k] = sum_n in[n] exp(-2 pi i k n / size).
// A plan is immutable after construction and may be shared across threads.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);
  ~FftPlan();
  FftPlan(FftPlan&&) noexcept;
  FftPlan& operator=(FftPlan&&) noexcept;

  std::size_t size() const { return n_; }

  void forward(std::span<const Complex> in, std::span<Complex> out) const;
  // Unnormalized inverse: out[n] = sum_k in[k] exp(+2 pi i k n / size).
  void inverse(std::span<const Complex> in, std::span<Complex> out) const;

 private:
  struct Bluestein;

  void transform(const Complex* in, Complex* out) const;
  void recurse(Complex* out, const Complex* in, std::size_t fstride,
               const std::size_t* factors) const;
  void butterfly2(Complex* out, std::size_t fstride, std::size_t m) const;
  void butterfly3(Complex* out, std::size_t fstride, std::size_t m) const;
  void butterfly4(Complex* out, std::size_t fstride, std::size_t m) const;
  void butterfly_generic(Complex* out, std::size_t fstride, std::size_t m,
                         std::size_t p) const;

  std::size_t n_ = 0;
  std::vector<Complex> twiddles_;
  // Pairs (radix, remaining length) consumed by the recursion.
  std::vector<std::size_t> factors_;
  std::unique_ptr<Bluestein> bluestein_;
};

// Real-input transform producing floor(n/2)+1 bins, and its inverse.
class RealFftPlan {
 public:
  explicit RealFftPlan(std::size_t n);

  std::size_t size() const { return plan_.size(); }
  std::size_t bins() const { return half_bins(plan_.size()); }

  void forward(std::span<const double> x, std::span<Complex> bins) const;
  // Includes the 1/n factor. Imaginary parts of the DC bin (and of the
  // Nyquist bin for even n) do not contribute to a real signal and are
  // ignored.
  void inverse(std::span<const Complex> bins, std::span<double> x) const;

 private:
  FftPlan plan_;
};

// Cached plans, one cache per thread.
const FftPlan& complex_plan(std::size_t n);
const RealFftPlan& real_plan(std::size_t n);

}  // namespace filternet::dsp

#endif  // FILTERNET_DSP_FFT_HPP_
