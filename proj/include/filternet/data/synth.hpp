// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_DATA_SYNTH_HPP_
#define FILTERNET_DATA_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "filternet/data/frame.hpp"

namespace filternet::data {

// Gaussian noise is drawn from std::normal_distribution over mt19937_64.
inline constexpr std::string_view kNoiseGenerator =
    "mt19937_64+normal_distribution";

// x[t] = sum_j amplitudes[j] * sin(2 pi t / periods[j]). One channel.
TimeSeriesFrame synth_multifreq(std::size_t steps,
                                const std::vector<double>& periods = {96, 24, 4},
                                const std::vector<double>& amplitudes = {1, 1, 1});

// x[t] = slope * t + noise.
TimeSeriesFrame synth_trend_noise(std::size_t steps, double slope,
                                  double noise_std, std::uint64_t seed);

// x[t] = sum_j sin(2 pi t / periods[j]) + noise.
TimeSeriesFrame synth_multiperiod_noise(std::size_t steps,
                                        const std::vector<double>& periods,
                                        double noise_std, std::uint64_t seed);

}  // namespace filternet::data

#endif  // FILTERNET_DATA_SYNTH_HPP_
