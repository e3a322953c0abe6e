// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_MODEL_FILTERNET_HPP_
#define FILTERNET_MODEL_FILTERNET_HPP_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "filternet/diff/tape.hpp"
#include "filternet/diff/tensor.hpp"
#include "filternet/model/config.hpp"

namespace filternet {

// Per-window, per-channel statistics captured by instance_norm.
struct RevInState {
  Tensor mean;    // [B, N]
  Tensor stddev;  // [B, N], >= epsilon
};

// One complex weight per half-spectrum bin: [1, F] shared by all channels
// or [N, F] with one filter per channel.
struct PaiFilterParams {
  ComplexParam weights;
};

// Contextual filter: complex affine embedding F -> D and a stack of K
// complex vectors [1, D] whose elementwise product weights the embedding.
struct TexFilterParams {
  ComplexParam kappa_weight;  // [F, D]
  ComplexParam kappa_bias;    // [D]
  std::vector<ComplexParam> w_stack;
};

// Channel-shared head. With Variant::kNoFfn only w2 ([in, tau]) is used,
// as a bias-free linear map.
struct FfnParams {
  Param w1;  // [in, H]
  Param b1;  // [H]
  Param w2;  // [H, tau] or [in, tau]
  Param b2;  // [tau]
};

// Tape stage under which the filter block is recorded and timed.
inline constexpr std::size_t kFilterStage = 1;

class FilterNet {
 public:
  // Random initialization; identical (config, seed) give identical weights.
  FilterNet(const ModelConfig& config, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }

  std::optional<PaiFilterParams>& pai() { return pai_; }
  const std::optional<PaiFilterParams>& pai() const { return pai_; }
  std::optional<TexFilterParams>& tex() { return tex_; }
  const std::optional<TexFilterParams>& tex() const { return tex_; }
  FfnParams& ffn() { return ffn_; }
  const FfnParams& ffn() const { return ffn_; }

  // Every learnable parameter in a fixed order.
  std::vector<Param*> parameters();
  std::vector<const Param*> parameters() const;
  void zero_grad();

  // Records the full pipeline on `tape` for input x: [B, N, L] and returns
  // the prediction [B, N, tau]. Filter-block forward time is added to the
  // tape under kFilterStage.
  ValueId build(Tape& tape, ValueId x);

  // Inference; no gradient buffer is touched.
  Tensor forward(const Tensor& x) const;

  // Effective frequency response exported for inspection: the PaiFilter
  // weights of `channel` or the TexFilter product of the K weight vectors.
  std::pair<std::vector<double>, std::vector<double>> effective_filter(
      std::size_t channel = 0) const;

 private:
  ValueId build_filter(Tape& tape, ValueId z);
  ValueId build_head(Tape& tape, ValueId s);

  ModelConfig config_;
  std::optional<PaiFilterParams> pai_;
  std::optional<TexFilterParams> tex_;
  FfnParams ffn_;
};

// Stand-alone stages, each a single forward evaluation.
std::pair<Tensor, RevInState> instance_norm(const Tensor& x, double epsilon);
Tensor inverse_norm(const Tensor& p, const RevInState& state);
Tensor pai_filter_forward(const Tensor& z, PaiFilterParams& params);
Tensor tex_filter_forward(const Tensor& z, TexFilterParams& params,
                          Activation activation);
Tensor ffn_forward(const Tensor& s, FfnParams& params, Activation activation);
Tensor filternet_forward(const Tensor& x, const FilterNet& model);

}  // namespace filternet

#endif  // FILTERNET_MODEL_FILTERNET_HPP_
