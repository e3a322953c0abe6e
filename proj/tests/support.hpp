// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// Test-only oracles and generators. Nothing here calls into the FFT code.

#ifndef FILTERNET_TESTS_SUPPORT_HPP_
#define FILTERNET_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "filternet/diff/grad_check.hpp"
#include "filternet/diff/tensor.hpp"

namespace filternet::testing {

// Seed for a property test's generator. The suite runs with the literal
// seeds as written unless FILTERNET_PROPERTY_SEED is set, in which case
// every generator is re-keyed from it.
inline std::uint64_t property_seed(std::uint64_t local) {
  static const std::uint64_t base = [] {
    const char* env = std::getenv("FILTERNET_PROPERTY_SEED");
    return env == nullptr ? std::uint64_t{0} : std::stoull(env);
  }();
  if (base == 0) return local;
  // splitmix64 finalizer over (base, local)
  std::uint64_t z = base * 0x9e3779b97f4a7c15ULL + local;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

using Cplx = std::complex<double>;

// Direct O(L^2) DFT. sign = -1 forward, +1 inverse (unnormalized).
inline std::vector<Cplx> naive_dft(const std::vector<Cplx>& x, int sign) {
  const std::size_t n = x.size();
  std::vector<Cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Cplx acc{};
    for (std::size_t t = 0; t < n; ++t) {
      // (k * t) mod n keeps the angle argument exact for large products.
      const double angle =
          sign * 2.0 * std::numbers::pi * double((k * t) % n) / double(n);
      acc += x[t] * Cplx(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  return out;
}

// Finite differences agree with the tape when every group meets the
// relative bound, or its largest absolute gap is under the round-off floor
// of a central difference (about 1e-16 * |loss| / eps).
inline bool fd_agrees(const ParamCheck& p, double rel_tol, double abs_tol = 1e-9) {
  return p.max_rel_error < rel_tol || p.max_abs_error < abs_tol;
}

inline bool fd_agrees(const GradCheckReport& r, double rel_tol,
                      double abs_tol = 1e-9) {
  return std::all_of(r.params.begin(), r.params.end(), [&](const ParamCheck& p) {
    return fd_agrees(p, rel_tol, abs_tol);
  });
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng,
                                         double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

inline Tensor random_tensor(Shape shape, std::mt19937_64& rng,
                            double lo = -1.0, double hi = 1.0) {
  const std::size_t n = shape_size(shape);
  return Tensor(std::move(shape), random_vector(n, rng, lo, hi));
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace filternet::testing

#endif  // FILTERNET_TESTS_SUPPORT_HPP_
