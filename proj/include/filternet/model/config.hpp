// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_MODEL_CONFIG_HPP_
#define FILTERNET_MODEL_CONFIG_HPP_

#include <cstddef>
#include <string>
#include <string_view>

#include <json.hpp>

#include "filternet/diff/tape.hpp"

namespace filternet {

enum class FilterKind { kPaiUni, kPaiInd, kTex };

// Architecture variants used by the ablation study.
enum class Variant {
  kFull,
  kNoNorm,    // no instance normalization / inversion
  kNoFilter,  // filter block replaced by identity
  kNoFfn,     // feed-forward head replaced by a bias-free linear map
};

FilterKind parse_filter_kind(std::string_view name);
std::string_view filter_kind_name(FilterKind kind);
Variant parse_variant(std::string_view name);
std::string_view variant_name(Variant variant);

struct ModelConfig {
  std::size_t lookback = 96;  // L
  std::size_t horizon = 96;   // tau
  std::size_t channels = 1;   // N
  FilterKind filter = FilterKind::kPaiUni;
  std::size_t ffn_hidden = 256;
  // TexFilter embedding width; 0 means "same as lookback".
  std::size_t embed_dim = 0;
  std::size_t num_weights = 3;  // K, TexFilter only
  Activation activation = Activation::kRelu;  // TexFilter sigma
  Activation ffn_activation = Activation::kRelu;
  double norm_epsilon = 1e-5;
  Variant variant = Variant::kFull;

  // Throws ConfigError on an invalid combination.
  void validate() const;

  std::size_t bins() const { return lookback / 2 + 1; }
  std::size_t embed_width() const {
    return embed_dim == 0 ? lookback : embed_dim;
  }
  // Width of the rows entering the head: L for PaiFilter, D for TexFilter.
  std::size_t head_input() const;
  bool is_tex() const { return filter == FilterKind::kTex; }
};

std::string describe(const ModelConfig& config);

nlohmann::json to_json(const ModelConfig& config);
// Overrides the fields present in `object`; unknown keys throw ConfigError.
void update_from_json(ModelConfig& config, const nlohmann::json& object,
                      const std::string& path = "model");

}  // namespace filternet

#endif  // FILTERNET_MODEL_CONFIG_HPP_
