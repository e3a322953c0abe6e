// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "filternet/model/config.hpp"

#include <sstream>

#include "filternet/common/error.hpp"
#include "filternet/common/json_fields.hpp"

namespace filternet {

FilterKind parse_filter_kind(std::string_view name) {
  if (name == "pai_uni") return FilterKind::kPaiUni;
  if (name == "pai_ind") return FilterKind::kPaiInd;
  if (name == "tex") return FilterKind::kTex;
  throw ConfigError("unknown filter kind '" + std::string(name) +
                    "' (expected pai_uni, pai_ind or tex)");
}

std::string_view filter_kind_name(FilterKind kind) {
  switch (kind) {
    case FilterKind::kPaiUni: return "pai_uni";
    case FilterKind::kPaiInd: return "pai_ind";
    case FilterKind::kTex: return "tex";
  }
  return "pai_uni";
}

Variant parse_variant(std::string_view name) {
  if (name == "full") return Variant::kFull;
  if (name == "no_norm") return Variant::kNoNorm;
  if (name == "no_filter") return Variant::kNoFilter;
  if (name == "no_ffn") return Variant::kNoFfn;
  throw ConfigError("unknown model variant '" + std::string(name) +
                    "' (expected full, no_norm, no_filter or no_ffn)");
}

std::string_view variant_name(Variant variant) {
  switch (variant) {
    case Variant::kFull: return "full";
    case Variant::kNoNorm: return "no_norm";
    case Variant::kNoFilter: return "no_filter";
    case Variant::kNoFfn: return "no_ffn";
  }
  return "full";
}

void ModelConfig::validate() const {
  if (lookback < 1 || horizon < 1 || channels < 1 || ffn_hidden < 1) {
    throw ConfigError("lookback, horizon, channels and ffn_hidden must be >= 1");
  }
  if (is_tex() && num_weights < 1) {
    throw ConfigError("TexFilter needs at least one weight vector (K >= 1)");
  }
  if (!(norm_epsilon > 0.0)) {
    throw ConfigError("norm_epsilon must be > 0");
  }
}

std::size_t ModelConfig::head_input() const {
  if (variant == Variant::kNoFilter || !is_tex()) return lookback;
  return embed_width();
}

std::string describe(const ModelConfig& c) {
  std::ostringstream out;
  out << filter_kind_name(c.filter) << " L=" << c.lookback
      << " tau=" << c.horizon << " N=" << c.channels << " H=" << c.ffn_hidden;
  if (c.is_tex()) {
    out << " D=" << c.embed_width() << " K=" << c.num_weights
        << " act=" << activation_name(c.activation);
  }
  if (c.variant != Variant::kFull) out << " variant=" << variant_name(c.variant);
  return out.str();
}

nlohmann::json to_json(const ModelConfig& c) {
  return {
      {"lookback", c.lookback},
      {"horizon", c.horizon},
      {"channels", c.channels},
      {"filter", filter_kind_name(c.filter)},
      {"ffn_hidden", c.ffn_hidden},
      {"embed_dim", c.embed_dim},
      {"num_weights", c.num_weights},
      {"activation", activation_name(c.activation)},
      {"ffn_activation", activation_name(c.ffn_activation)},
      {"norm_epsilon", c.norm_epsilon},
      {"variant", variant_name(c.variant)},
  };
}

void update_from_json(ModelConfig& c, const nlohmann::json& object,
                      const std::string& path) {
  JsonFields f(object, path);
  f.read("lookback", c.lookback);
  f.read("horizon", c.horizon);
  f.read("channels", c.channels);
  f.read_as("filter", c.filter, parse_filter_kind);
  f.read("ffn_hidden", c.ffn_hidden);
  f.read("embed_dim", c.embed_dim);
  f.read("num_weights", c.num_weights);
  f.read_as("activation", c.activation, parse_activation);
  f.read_as("ffn_activation", c.ffn_activation, parse_activation);
  f.read("norm_epsilon", c.norm_epsilon);
  f.read_as("variant", c.variant, parse_variant);
  f.finish();
}

}  // namespace filternet
