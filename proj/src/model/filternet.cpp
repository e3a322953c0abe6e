// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "filternet/model/filternet.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <string>

#include "filternet/common/error.hpp"

namespace filternet {

namespace {

Tensor uniform(Shape shape, double bound, std::mt19937_64& rng) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& v : t.data()) v = dist(rng);
  return t;
}

// Prefixes the failing stage onto shape errors.
template <typename Fn>
auto staged(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const ShapeError& e) {
    throw ShapeError(std::string(stage) + ": " + e.what());
  }
}

void require_rank3(const Tensor& x, const char* what) {
  if (x.rank() != 3) {
    throw ShapeError(std::string(what) + " expects [B, N, L], got " +
                     shape_string(x.shape()));
  }
}

}  // namespace

FilterNet::FilterNet(const ModelConfig& config, std::uint64_t seed)
    : config_(config) {
  config_.validate();
  std::mt19937_64 rng(seed);
  const std::size_t f = config_.bins();
  const double filter_bound = 1.0 / std::sqrt(double(f));
  if (config_.is_tex()) {
    const std::size_t d = config_.embed_width();
    TexFilterParams tex;
    tex.kappa_weight =
        ComplexParam("tex.kappa.weight", uniform({f, d}, filter_bound, rng),
                     uniform({f, d}, filter_bound, rng));
    tex.kappa_bias =
        ComplexParam("tex.kappa.bias", Tensor({d}, 0.0), Tensor({d}, 0.0));
    // Each factor starts near the multiplicative identity so the product
    // of K vectors neither vanishes nor explodes.
    const double w_bound = 1.0 / std::sqrt(double(d));
    for (std::size_t k = 0; k < config_.num_weights; ++k) {
      Tensor re = uniform({1, d}, w_bound, rng);
      for (double& v : re.data()) v += 1.0;
      tex.w_stack.emplace_back("tex.w" + std::to_string(k + 1), std::move(re),
                               uniform({1, d}, w_bound, rng));
    }
    tex_ = std::move(tex);
  } else {
    const std::size_t rows =
        config_.filter == FilterKind::kPaiInd ? config_.channels : 1;
    pai_ = PaiFilterParams{
        ComplexParam("pai.weights", uniform({rows, f}, filter_bound, rng),
                     uniform({rows, f}, filter_bound, rng))};
  }

  const std::size_t in = config_.head_input();
  const std::size_t h = config_.ffn_hidden;
  const std::size_t tau = config_.horizon;
  const double in_bound = 1.0 / std::sqrt(double(in));
  if (config_.variant == Variant::kNoFfn) {
    ffn_.w2 = Param("head.linear", uniform({in, tau}, in_bound, rng));
  } else {
    const double h_bound = 1.0 / std::sqrt(double(h));
    ffn_.w1 = Param("ffn.w1", uniform({in, h}, in_bound, rng));
    ffn_.b1 = Param("ffn.b1", uniform({h}, in_bound, rng));
    ffn_.w2 = Param("ffn.w2", uniform({h, tau}, h_bound, rng));
    ffn_.b2 = Param("ffn.b2", uniform({tau}, h_bound, rng));
  }
}

std::vector<Param*> FilterNet::parameters() {
  std::vector<Param*> out;
  if (pai_) {
    out.push_back(&pai_->weights.re);
    out.push_back(&pai_->weights.im);
  }
  if (tex_) {
    out.push_back(&tex_->kappa_weight.re);
    out.push_back(&tex_->kappa_weight.im);
    out.push_back(&tex_->kappa_bias.re);
    out.push_back(&tex_->kappa_bias.im);
    for (ComplexParam& w : tex_->w_stack) {
      out.push_back(&w.re);
      out.push_back(&w.im);
    }
  }
  if (config_.variant == Variant::kNoFfn) {
    out.push_back(&ffn_.w2);
  } else {
    out.push_back(&ffn_.w1);
    out.push_back(&ffn_.b1);
    out.push_back(&ffn_.w2);
    out.push_back(&ffn_.b2);
  }
  return out;
}

std::vector<const Param*> FilterNet::parameters() const {
  auto mut = const_cast<FilterNet*>(this)->parameters();
  return {mut.begin(), mut.end()};
}

void FilterNet::zero_grad() {
  for (Param* p : parameters()) p->zero_grad();
}

ValueId FilterNet::build(Tape& tape, ValueId x_id) {
  const Tensor& x = tape.value(x_id);
  require_rank3(x, "FilterNet");
  if (x.dim(1) != config_.channels || x.dim(2) != config_.lookback) {
    throw ShapeError("FilterNet: input " + shape_string(x.shape()) +
                     " does not match N=" + std::to_string(config_.channels) +
                     ", L=" + std::to_string(config_.lookback));
  }
  const bool use_norm = config_.variant != Variant::kNoNorm;
  NormOutputs norm;
  ValueId z = x_id;
  if (use_norm) {
    norm = staged("instance_norm",
                  [&] { return tape.instance_norm(x_id, config_.norm_epsilon); });
    z = norm.normalized;
  }
  const std::size_t outer_stage = tape.stage();
  tape.set_stage(kFilterStage);
  const auto start = std::chrono::steady_clock::now();
  const ValueId s = staged("filter", [&] { return build_filter(tape, z); });
  tape.add_stage_seconds(kFilterStage,
                         std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count());
  tape.set_stage(outer_stage);
  const ValueId p = staged("ffn", [&] { return build_head(tape, s); });
  if (!use_norm) return p;
  return staged("inverse_norm", [&] {
    return tape.inverse_norm(p, norm.mean, norm.stddev);
  });
}

ValueId FilterNet::build_filter(Tape& tape, ValueId z) {
  if (config_.variant == Variant::kNoFilter) return z;
  const CValue spectrum = tape.rfft(z);
  if (pai_) {
    const CValue weights = tape.param(pai_->weights);
    const CValue shaped = tape.complex_mul(spectrum, weights);
    return tape.irfft(shaped, config_.lookback);
  }
  TexFilterParams& tex = *tex_;
  const CValue embedded =
      tape.complex_affine(spectrum, tex.kappa_weight, tex.kappa_bias);
  CValue product = tape.param(tex.w_stack.front());
  for (std::size_t k = 1; k < tex.w_stack.size(); ++k) {
    product = tape.complex_mul(product, tape.param(tex.w_stack[k]));
  }
  const CValue response = tape.split_activation(
      tape.complex_mul(embedded, product), config_.activation);
  const CValue shaped = tape.complex_mul(embedded, response);
  return tape.inverse_dft_real(shaped);
}

ValueId FilterNet::build_head(Tape& tape, ValueId s) {
  if (config_.variant == Variant::kNoFfn) {
    return tape.affine(s, ffn_.w2, nullptr);
  }
  const ValueId hidden = tape.activation(tape.affine(s, ffn_.w1, &ffn_.b1),
                                         config_.ffn_activation);
  return tape.affine(hidden, ffn_.w2, &ffn_.b2);
}

Tensor FilterNet::forward(const Tensor& x) const {
  // The tape binds parameters mutably only so backward() can write their
  // gradients; without backward() nothing is written.
  Tape tape;
  const ValueId out =
      const_cast<FilterNet*>(this)->build(tape, tape.input(x));
  return tape.value(out);
}

std::pair<std::vector<double>, std::vector<double>>
FilterNet::effective_filter(std::size_t channel) const {
  if (pai_) {
    const Tensor& re = pai_->weights.re.value;
    const Tensor& im = pai_->weights.im.value;
    const std::size_t f = re.dim(1);
    const std::size_t row = re.dim(0) == 1 ? 0 : channel;
    if (row >= re.dim(0)) throw ShapeError("effective_filter: bad channel");
    return {std::vector<double>(re.data().begin() + row * f,
                                re.data().begin() + (row + 1) * f),
            std::vector<double>(im.data().begin() + row * f,
                                im.data().begin() + (row + 1) * f)};
  }
  const std::size_t d = config_.embed_width();
  std::vector<double> re(d, 1.0);
  std::vector<double> im(d, 0.0);
  for (const ComplexParam& w : tex_->w_stack) {
    for (std::size_t k = 0; k < d; ++k) {
      const double a = re[k];
      const double b = im[k];
      const double c = w.re.value[k];
      const double e = w.im.value[k];
      re[k] = a * c - b * e;
      im[k] = a * e + b * c;
    }
  }
  return {re, im};
}

std::pair<Tensor, RevInState> instance_norm(const Tensor& x, double epsilon) {
  Tape tape;
  const NormOutputs out = tape.instance_norm(tape.input(x), epsilon);
  return {tape.value(out.normalized),
          RevInState{tape.value(out.mean), tape.value(out.stddev)}};
}

Tensor inverse_norm(const Tensor& p, const RevInState& state) {
  if (p.rank() < 1 || state.mean.shape() != state.stddev.shape()) {
    throw ShapeError("inverse_norm: malformed state");
  }
  Shape stat_shape(p.shape().begin(), p.shape().end() - 1);
  if (stat_shape.empty()) stat_shape.push_back(1);
  if (state.mean.shape() != stat_shape) {
    throw ShapeError("inverse_norm: state " + shape_string(state.mean.shape()) +
                     " does not match predictions " + shape_string(p.shape()));
  }
  Tape tape;
  const ValueId out = tape.inverse_norm(
      tape.input(p), tape.input(state.mean), tape.input(state.stddev));
  return tape.value(out);
}

Tensor pai_filter_forward(const Tensor& z, PaiFilterParams& params) {
  require_rank3(z, "pai_filter_forward");
  const std::size_t f = z.dim(2) / 2 + 1;
  if (params.weights.re.value.rank() != 2 ||
      params.weights.re.value.dim(1) != f) {
    throw ShapeError("pai_filter_forward: filter has " +
                     shape_string(params.weights.re.value.shape()) +
                     " bins, input needs " + std::to_string(f));
  }
  Tape tape;
  const CValue spec = tape.rfft(tape.input(z));
  const CValue shaped = tape.complex_mul(spec, tape.param(params.weights));
  return tape.value(tape.irfft(shaped, z.dim(2)));
}

Tensor tex_filter_forward(const Tensor& z, TexFilterParams& params,
                          Activation activation) {
  require_rank3(z, "tex_filter_forward");
  if (params.w_stack.empty()) {
    throw ShapeError("tex_filter_forward: empty weight stack");
  }
  const std::size_t d = params.kappa_weight.re.value.dim(1);
  for (const ComplexParam& w : params.w_stack) {
    if (w.re.value.shape() != Shape{1, d}) {
      throw ShapeError("tex_filter_forward: weight vector " + w.re.name +
                       " is not [1, " + std::to_string(d) + "]");
    }
  }
  Tape tape;
  const CValue spec = tape.rfft(tape.input(z));
  const CValue e =
      tape.complex_affine(spec, params.kappa_weight, params.kappa_bias);
  CValue product = tape.param(params.w_stack.front());
  for (std::size_t k = 1; k < params.w_stack.size(); ++k) {
    product = tape.complex_mul(product, tape.param(params.w_stack[k]));
  }
  const CValue h =
      tape.split_activation(tape.complex_mul(e, product), activation);
  return tape.value(tape.inverse_dft_real(tape.complex_mul(e, h)));
}

Tensor ffn_forward(const Tensor& s, FfnParams& params, Activation activation) {
  Tape tape;
  const ValueId hidden = tape.activation(
      tape.affine(tape.input(s), params.w1, &params.b1), activation);
  return tape.value(tape.affine(hidden, params.w2, &params.b2));
}

Tensor filternet_forward(const Tensor& x, const FilterNet& model) {
  return model.forward(x);
}

}  // namespace filternet
