// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "filternet/dsp/fft.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "filternet/common/error.hpp"

namespace filternet::dsp {

namespace {

// Largest radix handled by the direct O(p^2) butterfly; lengths with a
// larger prime factor are routed through Bluestein.
constexpr std::size_t kMaxDirectRadix = 31;

std::vector<std::size_t> factorize(std::size_t n) {
  std::vector<std::size_t> out;
  std::size_t p = 4;
  const auto floor_sqrt = static_cast<std::size_t>(std::sqrt(double(n)));
  while (n > 1) {
    while (n % p != 0) {
      switch (p) {
        case 4: p = 2; break;
        case 2: p = 3; break;
        default: p += 2; break;
      }
      if (p > floor_sqrt) p = n;
    }
    n /= p;
    out.push_back(p);
    out.push_back(n);
  }
  return out;
}

std::size_t largest_radix(const std::vector<std::size_t>& factors) {
  std::size_t largest = 1;
  for (std::size_t i = 0; i < factors.size(); i += 2) {
    largest = std::max(largest, factors[i]);
  }
  return largest;
}

// Per-thread work buffers reused across calls; slot 0 belongs to
// FftPlan::inverse, slots 1 and 2 to the real transforms that call it.
std::vector<Complex>& scratch(std::size_t slot, std::size_t n) {
  thread_local std::array<std::vector<Complex>, 3> buffers;
  std::vector<Complex>& b = buffers[slot];
  if (b.size() != n) b.resize(n);
  return b;
}

}  // namespace

struct FftPlan::Bluestein {
  std::size_t padded = 0;
  std::vector<Complex> chirp;           // exp(-i pi k^2 / n), k < n
  std::vector<Complex> kernel_spectrum;  // FFT of the conjugate chirp
  std::unique_ptr<FftPlan> inner;
};

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (n == 0) throw ShapeError("FFT length must be at least 1");
  twiddles_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = -2.0 * std::numbers::pi * double(i) / double(n);
    twiddles_[i] = {std::cos(phase), std::sin(phase)};
  }
  factors_ = factorize(n);
  if (largest_radix(factors_) <= kMaxDirectRadix) return;

  auto b = std::make_unique<Bluestein>();
  b->padded = 1;
  while (b->padded < 2 * n - 1) b->padded <<= 1;
  b->inner = std::make_unique<FftPlan>(b->padded);
  b->chirp.resize(n);
  const std::uint64_t two_n = 2 * static_cast<std::uint64_t>(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the phase argument small for large k.
    const std::uint64_t sq = (static_cast<std::uint64_t>(k) * k) % two_n;
    const double phase = -std::numbers::pi * double(sq) / double(n);
    b->chirp[k] = {std::cos(phase), std::sin(phase)};
  }
  std::vector<Complex> kernel(b->padded, Complex{});
  kernel[0] = std::conj(b->chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    kernel[k] = std::conj(b->chirp[k]);
    kernel[b->padded - k] = std::conj(b->chirp[k]);
  }
  b->kernel_spectrum.resize(b->padded);
  b->inner->forward(kernel, b->kernel_spectrum);
  bluestein_ = std::move(b);
}

FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

void FftPlan::forward(std::span<const Complex> in,
                      std::span<Complex> out) const {
  if (in.size() != n_ || out.size() != n_) {
    throw ShapeError("FFT buffer length does not match plan length");
  }
  if (in.data() == out.data()) {
    std::vector<Complex> copy(in.begin(), in.end());
    transform(copy.data(), out.data());
  } else {
    transform(in.data(), out.data());
  }
}

void FftPlan::inverse(std::span<const Complex> in,
                      std::span<Complex> out) const {
  if (in.size() != n_ || out.size() != n_) {
    throw ShapeError("FFT buffer length does not match plan length");
  }
  // Bluestein re-enters inverse on its inner plan, so it keeps its own copy.
  std::vector<Complex> local;
  std::vector<Complex>& conj_in =
      bluestein_ ? (local.resize(n_), local) : scratch(0, n_);
  std::transform(in.begin(), in.end(), conj_in.begin(),
                 [](Complex c) { return std::conj(c); });
  transform(conj_in.data(), out.data());
  for (Complex& c : out) c = std::conj(c);
}

void FftPlan::transform(const Complex* in, Complex* out) const {
  if (n_ == 1) {
    out[0] = in[0];
    return;
  }
  if (!bluestein_) {
    recurse(out, in, 1, factors_.data());
    return;
  }
  const Bluestein& b = *bluestein_;
  std::vector<Complex> work(b.padded, Complex{});
  for (std::size_t k = 0; k < n_; ++k) work[k] = in[k] * b.chirp[k];
  std::vector<Complex> spec(b.padded);
  b.inner->forward(work, spec);
  for (std::size_t k = 0; k < b.padded; ++k) spec[k] *= b.kernel_spectrum[k];
  b.inner->inverse(spec, work);
  const double scale = 1.0 / double(b.padded);
  for (std::size_t k = 0; k < n_; ++k) out[k] = work[k] * b.chirp[k] * scale;
}

void FftPlan::recurse(Complex* out, const Complex* in, std::size_t fstride,
                      const std::size_t* factors) const {
  const std::size_t p = factors[0];
  const std::size_t m = factors[1];
  if (m == 1) {
    for (std::size_t i = 0; i < p; ++i) out[i] = in[i * fstride];
  } else {
    for (std::size_t q = 0; q < p; ++q) {
      recurse(out + q * m, in + q * fstride, fstride * p, factors + 2);
    }
  }
  switch (p) {
    case 2: butterfly2(out, fstride, m); break;
    case 3: butterfly3(out, fstride, m); break;
    case 4: butterfly4(out, fstride, m); break;
    default: butterfly_generic(out, fstride, m, p); break;
  }
}

void FftPlan::butterfly2(Complex* out, std::size_t fstride,
                         std::size_t m) const {
  Complex* hi = out + m;
  for (std::size_t u = 0; u < m; ++u) {
    const Complex t = hi[u] * twiddles_[u * fstride];
    hi[u] = out[u] - t;
    out[u] += t;
  }
}

void FftPlan::butterfly3(Complex* out, std::size_t fstride,
                         std::size_t m) const {
  // exp(-2 pi i / 3) = -1/2 - i sqrt(3)/2
  constexpr double kSin = 0.86602540378443864676;
  for (std::size_t u = 0; u < m; ++u) {
    const Complex a0 = out[u];
    const Complex a1 = out[u + m] * twiddles_[u * fstride];
    const Complex a2 = out[u + 2 * m] * twiddles_[2 * u * fstride];
    const Complex sum = a1 + a2;
    const Complex diff = a1 - a2;
    const Complex base = a0 - 0.5 * sum;
    // diff * (-i sqrt3/2)
    const Complex rot{diff.imag() * kSin, -diff.real() * kSin};
    out[u] = a0 + sum;
    out[u + m] = base + rot;
    out[u + 2 * m] = base - rot;
  }
}

void FftPlan::butterfly4(Complex* out, std::size_t fstride,
                         std::size_t m) const {
  for (std::size_t u = 0; u < m; ++u) {
    const Complex a0 = out[u];
    const Complex a1 = out[u + m] * twiddles_[u * fstride];
    const Complex a2 = out[u + 2 * m] * twiddles_[2 * u * fstride];
    const Complex a3 = out[u + 3 * m] * twiddles_[3 * u * fstride];
    const Complex s02 = a0 + a2;
    const Complex d02 = a0 - a2;
    const Complex s13 = a1 + a3;
    const Complex d13 = a1 - a3;
    // -i * d13
    const Complex rot{d13.imag(), -d13.real()};
    out[u] = s02 + s13;
    out[u + m] = d02 + rot;
    out[u + 2 * m] = s02 - s13;
    out[u + 3 * m] = d02 - rot;
  }
}

void FftPlan::butterfly_generic(Complex* out, std::size_t fstride,
                                std::size_t m, std::size_t p) const {
  std::array<Complex, kMaxDirectRadix + 1> scratch{};
  const std::size_t root_step = fstride * m;  // n / p
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t q = 0; q < p; ++q) {
      scratch[q] = out[u + q * m] * twiddles_[(q * u * fstride) % n_];
    }
    for (std::size_t q1 = 0; q1 < p; ++q1) {
      Complex acc = scratch[0];
      for (std::size_t q2 = 1; q2 < p; ++q2) {
        acc += scratch[q2] * twiddles_[root_step * ((q1 * q2) % p)];
      }
      out[u + q1 * m] = acc;
    }
  }
}

RealFftPlan::RealFftPlan(std::size_t n) : plan_(n) {}

void RealFftPlan::forward(std::span<const double> x,
                          std::span<Complex> bins) const {
  const std::size_t n = plan_.size();
  if (x.size() != n || bins.size() != half_bins(n)) {
    throw ShapeError("real FFT buffer length does not match plan length");
  }
  std::vector<Complex>& in = scratch(1, n);
  std::vector<Complex>& out = scratch(2, n);
  std::copy(x.begin(), x.end(), in.begin());
  plan_.forward(in, out);
  std::copy_n(out.begin(), bins.size(), bins.begin());
  // Self-conjugate bins of a real signal are real.
  bins[0].imag(0.0);
  if (n % 2 == 0) bins[n / 2].imag(0.0);
}

void RealFftPlan::inverse(std::span<const Complex> bins,
                          std::span<double> x) const {
  const std::size_t n = plan_.size();
  const std::size_t f = half_bins(n);
  if (x.size() != n || bins.size() != f) {
    throw ShapeError("real FFT buffer length does not match plan length");
  }
  std::vector<Complex>& full = scratch(1, n);
  full[0] = {bins[0].real(), 0.0};
  for (std::size_t k = 1; k < f; ++k) {
    full[k] = bins[k];
    full[n - k] = std::conj(bins[k]);
  }
  if (n % 2 == 0) full[n / 2] = {bins[n / 2].real(), 0.0};
  std::vector<Complex>& out = scratch(2, n);
  plan_.inverse(full, out);
  const double scale = 1.0 / double(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = out[i].real() * scale;
}

const FftPlan& complex_plan(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::unique_ptr<FftPlan>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FftPlan>(n);
  return *slot;
}

const RealFftPlan& real_plan(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::unique_ptr<RealFftPlan>>
      cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RealFftPlan>(n);
  return *slot;
}

}  // namespace filternet::dsp
