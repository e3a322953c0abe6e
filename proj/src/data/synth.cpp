// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "filternet/data/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "filternet/common/error.hpp"

namespace filternet::data {

namespace {

void check_periods(const std::vector<double>& periods) {
  if (periods.empty()) throw ConfigError("at least one period is required");
  for (double p : periods) {
    if (!(p > 0.0)) throw ConfigError("periods must be positive");
  }
}

TimeSeriesFrame single_channel(std::vector<double> values) {
  TimeSeriesFrame frame;
  frame.channel_names = {"value"};
  frame.values = std::move(values);
  return frame;
}

double sine(double t, double period) {
  return std::sin(2.0 * std::numbers::pi * t / period);
}

}  // namespace

TimeSeriesFrame synth_multifreq(std::size_t steps,
                                const std::vector<double>& periods,
                                const std::vector<double>& amplitudes) {
  check_periods(periods);
  if (amplitudes.size() != periods.size()) {
    throw ConfigError("need one amplitude per period");
  }
  const double longest = *std::max_element(periods.begin(), periods.end());
  if (double(steps) < 2.0 * longest) {
    throw ConfigError("need at least two full periods of the longest tone");
  }
  std::vector<double> v(steps, 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t j = 0; j < periods.size(); ++j) {
      v[t] += amplitudes[j] * sine(double(t), periods[j]);
    }
  }
  return single_channel(std::move(v));
}

TimeSeriesFrame synth_trend_noise(std::size_t steps, double slope,
                                  double noise_std, std::uint64_t seed) {
  if (!(noise_std >= 0.0)) throw ConfigError("noise_std must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> v(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    const double e = noise(rng);
    v[t] = slope * double(t) + noise_std * e;
  }
  return single_channel(std::move(v));
}

TimeSeriesFrame synth_multiperiod_noise(std::size_t steps,
                                        const std::vector<double>& periods,
                                        double noise_std, std::uint64_t seed) {
  check_periods(periods);
  if (!(noise_std >= 0.0)) throw ConfigError("noise_std must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> v(steps, 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    for (double p : periods) v[t] += sine(double(t), p);
    v[t] += noise_std * noise(rng);
  }
  return single_channel(std::move(v));
}

}  // namespace filternet::data
