// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "filternet/diff/tape.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <queue>
#include <utility>

#include "filternet/common/error.hpp"
#include "filternet/dsp/fft.hpp"

namespace filternet {

namespace {

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVec = Eigen::Matrix<double, 1, Eigen::Dynamic>;
using dsp::Complex;

std::size_t last_dim(const Tensor& t) {
  if (t.rank() == 0) throw ShapeError("tensor has no axes");
  return t.shape().back();
}

Shape with_last(const Shape& shape, std::size_t last) {
  Shape out = shape;
  out.back() = last;
  return out;
}

Shape drop_last(const Shape& shape) {
  Shape out(shape.begin(), shape.end() - 1);
  if (out.empty()) out.push_back(1);
  return out;
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(what) + ": shapes " + shape_string(a.shape()) +
                     " and " + shape_string(b.shape()) + " differ");
  }
}

// Row-wise forward half-spectrum transform.
void rows_rfft(const double* x, std::size_t rows, std::size_t len, double* re,
               double* im) {
  const dsp::RealFftPlan& plan = dsp::real_plan(len);
  const std::size_t f = dsp::half_bins(len);
  std::vector<Complex> bins(f);
  for (std::size_t r = 0; r < rows; ++r) {
    plan.forward(std::span<const double>(x + r * len, len), bins);
    for (std::size_t k = 0; k < f; ++k) {
      re[r * f + k] = bins[k].real();
      im[r * f + k] = bins[k].imag();
    }
  }
}

// Row-wise inverse of rows_rfft, 1/len scaling included.
void rows_irfft(const double* re, const double* im, std::size_t rows,
                std::size_t len, double* x) {
  const dsp::RealFftPlan& plan = dsp::real_plan(len);
  const std::size_t f = dsp::half_bins(len);
  std::vector<Complex> bins(f);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < f; ++k) {
      bins[k] = {re[r * f + k], im[r * f + k]};
    }
    plan.inverse(bins, std::span<double>(x + r * len, len));
  }
}

bool is_self_conjugate_bin(std::size_t k, std::size_t len) {
  return k == 0 || (len % 2 == 0 && k == len / 2);
}

}  // namespace

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "gelu") return Activation::kGelu;
  if (name == "identity") return Activation::kIdentity;
  throw ConfigError("unknown activation '" + std::string(name) +
                    "' (expected relu, gelu or identity)");
}

std::string_view activation_name(Activation kind) {
  switch (kind) {
    case Activation::kRelu: return "relu";
    case Activation::kGelu: return "gelu";
    case Activation::kIdentity: return "identity";
  }
  return "identity";
}

double activate(Activation kind, double v) {
  switch (kind) {
    case Activation::kRelu: return v > 0.0 ? v : 0.0;
    case Activation::kGelu:
      return 0.5 * v * (1.0 + std::erf(v * std::numbers::sqrt2 / 2.0));
    case Activation::kIdentity: return v;
  }
  return v;
}

double activate_derivative(Activation kind, double v) {
  switch (kind) {
    // Subgradient 0 at the kink.
    case Activation::kRelu: return v > 0.0 ? 1.0 : 0.0;
    case Activation::kGelu: {
      const double cdf = 0.5 * (1.0 + std::erf(v * std::numbers::sqrt2 / 2.0));
      const double pdf =
          std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi);
      return cdf + v * pdf;
    }
    case Activation::kIdentity: return 1.0;
  }
  return 1.0;
}

ValueId Tape::push_value(Tensor value, bool grad_needed) {
  Slot slot;
  slot.own = std::move(value);
  slot.needs_grad = grad_needed;
  slots_.push_back(std::move(slot));
  return slots_.size() - 1;
}

bool Tape::any_needs_grad(std::initializer_list<ValueId> ids) const {
  return std::any_of(ids.begin(), ids.end(),
                     [this](ValueId id) { return slots_[id].needs_grad; });
}

Tensor& Tape::grad_mut(ValueId id) {
  Slot& s = slots_[id];
  if (!s.has_grad) {
    s.grad = Tensor(value(id).shape(), 0.0);
    s.has_grad = true;
  }
  return s.grad;
}

void Tape::add_node(std::vector<ValueId> inputs, std::vector<ValueId> outputs,
                    std::function<void()> backward) {
  if (stage_ >= kStages) throw ShapeError("tape stage out of range");
  nodes_.push_back(
      {std::move(inputs), std::move(outputs), std::move(backward), stage_});
}

const Tensor& Tape::value(ValueId id) const {
  const Slot& s = slots_.at(id);
  return s.external != nullptr ? *s.external : s.own;
}

Tensor Tape::grad(ValueId id) const {
  const Slot& s = slots_.at(id);
  if (s.has_grad) return s.grad;
  return Tensor(value(id).shape(), 0.0);
}

ValueId Tape::input(Tensor value, bool requires_grad) {
  return push_value(std::move(value), requires_grad);
}

ValueId Tape::param(Param& p) {
  if (p.grad.shape() != p.value.shape()) p.zero_grad();
  Slot slot;
  slot.external = &p.value;
  slot.param = &p;
  slot.needs_grad = true;
  slots_.push_back(std::move(slot));
  return slots_.size() - 1;
}

CValue Tape::param(ComplexParam& p) { return {param(p.re), param(p.im)}; }

ValueId Tape::affine(ValueId x_id, Param& weight, Param* bias) {
  const ValueId w_id = param(weight);
  const ValueId b_id = bias != nullptr ? param(*bias) : w_id;
  const Tensor& x = value(x_id);
  const Tensor& w = weight.value;
  if (w.rank() != 2 || last_dim(x) != w.dim(0)) {
    throw ShapeError("affine: input " + shape_string(x.shape()) +
                     " does not match weight " + shape_string(w.shape()));
  }
  const std::size_t in = w.dim(0);
  const std::size_t out = w.dim(1);
  if (bias != nullptr && bias->value.shape() != Shape{out}) {
    throw ShapeError("affine: bias " + shape_string(bias->value.shape()) +
                     " does not match output width " + std::to_string(out));
  }
  const auto rows = static_cast<Eigen::Index>(x.size() / in);
  Tensor y(with_last(x.shape(), out));
  Eigen::Map<const RowMat> xm(x.data().data(), rows, Eigen::Index(in));
  Eigen::Map<const RowMat> wm(w.data().data(), Eigen::Index(in),
                              Eigen::Index(out));
  Eigen::Map<RowMat> ym(y.data().data(), rows, Eigen::Index(out));
  ym.noalias() = xm * wm;
  if (bias != nullptr) {
    ym.rowwise() += Eigen::Map<const RowVec>(bias->value.data().data(),
                                             Eigen::Index(out));
  }
  const ValueId y_id = push_value(std::move(y), true);
  const bool has_bias = bias != nullptr;
  add_node({x_id, w_id, b_id}, {y_id}, [=, this] {
    if (!has_grad(y_id)) return;
    const Tensor& g = grad_ref(y_id);
    Eigen::Map<const RowMat> gm(g.data().data(), rows, Eigen::Index(out));
    const Tensor& xv = value(x_id);
    Eigen::Map<const RowMat> xv_m(xv.data().data(), rows, Eigen::Index(in));
    {
      Tensor& gw = grad_mut(w_id);
      Eigen::Map<RowMat> gw_m(gw.data().data(), Eigen::Index(in),
                              Eigen::Index(out));
      gw_m.noalias() += xv_m.transpose() * gm;
    }
    if (has_bias) {
      Tensor& gb = grad_mut(b_id);
      Eigen::Map<RowVec>(gb.data().data(), Eigen::Index(out)) +=
          gm.colwise().sum();
    }
    if (needs_grad(x_id)) {
      const Tensor& wv = value(w_id);
      Eigen::Map<const RowMat> wv_m(wv.data().data(), Eigen::Index(in),
                                    Eigen::Index(out));
      Tensor& gx = grad_mut(x_id);
      Eigen::Map<RowMat> gx_m(gx.data().data(), rows, Eigen::Index(in));
      gx_m.noalias() += gm * wv_m.transpose();
    }
  });
  return y_id;
}

ValueId Tape::activation(ValueId x_id, Activation kind) {
  const Tensor& x = value(x_id);
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = activate(kind, x[i]);
  const ValueId y_id = push_value(std::move(y), needs_grad(x_id));
  add_node({x_id}, {y_id}, [=, this] {
    if (!has_grad(y_id) || !needs_grad(x_id)) return;
    const Tensor& g = grad_ref(y_id);
    const Tensor& xv = value(x_id);
    Tensor& gx = grad_mut(x_id);
    for (std::size_t i = 0; i < xv.size(); ++i) {
      gx[i] += g[i] * activate_derivative(kind, xv[i]);
    }
  });
  return y_id;
}

CValue Tape::rfft(ValueId x_id) {
  const Tensor& x = value(x_id);
  const std::size_t len = last_dim(x);
  const std::size_t f = dsp::half_bins(len);
  const std::size_t rows = x.size() / len;
  Tensor re(with_last(x.shape(), f));
  Tensor im(with_last(x.shape(), f));
  rows_rfft(x.data().data(), rows, len, re.data().data(), im.data().data());
  const bool ng = needs_grad(x_id);
  const ValueId re_id = push_value(std::move(re), ng);
  const ValueId im_id = push_value(std::move(im), ng);
  add_node({x_id}, {re_id, im_id}, [=, this] {
    if (!needs_grad(x_id) || (!has_grad(re_id) && !has_grad(im_id))) return;
    // Adjoint: dx[n] = Re sum_k G[k] e^{+2 pi i k n / L}, which is L times
    // the inverse real transform of G with the paired bins halved.
    const Tensor gre = grad(re_id);
    const Tensor gim = grad(im_id);
    Tensor hre = gre;
    Tensor him = gim;
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t k = 0; k < f; ++k) {
        if (is_self_conjugate_bin(k, len)) continue;
        hre[r * f + k] *= 0.5;
        him[r * f + k] *= 0.5;
      }
    }
    std::vector<double> dx(rows * len);
    rows_irfft(hre.data().data(), him.data().data(), rows, len, dx.data());
    Tensor& gx = grad_mut(x_id);
    const double scale = double(len);
    for (std::size_t i = 0; i < dx.size(); ++i) gx[i] += scale * dx[i];
  });
  return {re_id, im_id};
}

ValueId Tape::irfft(CValue s, std::size_t len) {
  const Tensor& re = value(s.re);
  const Tensor& im = value(s.im);
  require_same_shape(re, im, "irfft");
  const std::size_t f = dsp::half_bins(len);
  if (len == 0 || last_dim(re) != f) {
    throw ShapeError("irfft: " + std::to_string(last_dim(re)) +
                     " bins cannot describe length " + std::to_string(len));
  }
  const std::size_t rows = re.size() / f;
  Tensor x(with_last(re.shape(), len));
  rows_irfft(re.data().data(), im.data().data(), rows, len, x.data().data());
  const ValueId x_id = push_value(std::move(x), any_needs_grad({s.re, s.im}));
  add_node({s.re, s.im}, {x_id}, [=, this] {
    if (!has_grad(x_id)) return;
    const Tensor& g = grad_ref(x_id);
    std::vector<double> gre(rows * f);
    std::vector<double> gim(rows * f);
    rows_rfft(g.data().data(), rows, len, gre.data(), gim.data());
    const double inv_len = 1.0 / double(len);
    Tensor* dre = needs_grad(s.re) ? &grad_mut(s.re) : nullptr;
    Tensor* dim = needs_grad(s.im) ? &grad_mut(s.im) : nullptr;
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t k = 0; k < f; ++k) {
        const std::size_t i = r * f + k;
        const bool self_conj = is_self_conjugate_bin(k, len);
        const double w = self_conj ? inv_len : 2.0 * inv_len;
        if (dre != nullptr) (*dre)[i] += w * gre[i];
        // The imaginary part of a self-conjugate bin never reaches the
        // real output.
        if (dim != nullptr && !self_conj) (*dim)[i] += w * gim[i];
      }
    }
  });
  return x_id;
}

ValueId Tape::inverse_dft_real(CValue s) {
  const Tensor& re = value(s.re);
  const Tensor& im = value(s.im);
  require_same_shape(re, im, "inverse_dft_real");
  const std::size_t len = last_dim(re);
  const std::size_t rows = re.size() / len;
  const dsp::FftPlan& plan = dsp::complex_plan(len);
  Tensor x(re.shape());
  {
    std::vector<Complex> buf(len);
    std::vector<Complex> out(len);
    const double inv_len = 1.0 / double(len);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t k = 0; k < len; ++k) {
        buf[k] = {re[r * len + k], im[r * len + k]};
      }
      plan.inverse(buf, out);
      for (std::size_t n = 0; n < len; ++n) {
        x[r * len + n] = out[n].real() * inv_len;
      }
    }
  }
  const ValueId x_id = push_value(std::move(x), any_needs_grad({s.re, s.im}));
  add_node({s.re, s.im}, {x_id}, [=, this] {
    if (!has_grad(x_id)) return;
    // d(re) + i d(im) = DFT(g) / len.
    const Tensor& g = grad_ref(x_id);
    const dsp::FftPlan& p = dsp::complex_plan(len);
    std::vector<Complex> buf(len);
    std::vector<Complex> spec(len);
    const double inv_len = 1.0 / double(len);
    Tensor* dre = needs_grad(s.re) ? &grad_mut(s.re) : nullptr;
    Tensor* dim = needs_grad(s.im) ? &grad_mut(s.im) : nullptr;
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t n = 0; n < len; ++n) buf[n] = {g[r * len + n], 0.0};
      p.forward(buf, spec);
      for (std::size_t k = 0; k < len; ++k) {
        if (dre != nullptr) (*dre)[r * len + k] += spec[k].real() * inv_len;
        if (dim != nullptr) (*dim)[r * len + k] += spec[k].imag() * inv_len;
      }
    }
  });
  return x_id;
}

CValue Tape::complex_mul(CValue a, CValue b) {
  const Tensor& ar = value(a.re);
  const Tensor& ai = value(a.im);
  const Tensor& br = value(b.re);
  const Tensor& bi = value(b.im);
  require_same_shape(ar, ai, "complex_mul (a)");
  require_same_shape(br, bi, "complex_mul (b)");
  const std::size_t width = last_dim(ar);
  if (last_dim(br) != width || br.size() == 0 ||
      (ar.size() / width) % (br.size() / width) != 0) {
    throw ShapeError("complex_mul: cannot broadcast " +
                     shape_string(br.shape()) + " onto " +
                     shape_string(ar.shape()));
  }
  const std::size_t rows_a = ar.size() / width;
  const std::size_t rows_b = br.size() / width;
  Tensor out_re(ar.shape());
  Tensor out_im(ar.shape());
  for (std::size_t r = 0; r < rows_a; ++r) {
    const std::size_t rb = r % rows_b;
    for (std::size_t k = 0; k < width; ++k) {
      const std::size_t i = r * width + k;
      const std::size_t j = rb * width + k;
      out_re[i] = ar[i] * br[j] - ai[i] * bi[j];
      out_im[i] = ar[i] * bi[j] + ai[i] * br[j];
    }
  }
  const bool ng = any_needs_grad({a.re, a.im, b.re, b.im});
  const ValueId re_id = push_value(std::move(out_re), ng);
  const ValueId im_id = push_value(std::move(out_im), ng);
  add_node({a.re, a.im, b.re, b.im}, {re_id, im_id}, [=, this] {
    if (!has_grad(re_id) && !has_grad(im_id)) return;
    const Tensor gr = grad(re_id);
    const Tensor gi = grad(im_id);
    const Tensor& ar_v = value(a.re);
    const Tensor& ai_v = value(a.im);
    const Tensor& br_v = value(b.re);
    const Tensor& bi_v = value(b.im);
    const bool need_a = needs_grad(a.re) || needs_grad(a.im);
    const bool need_b = needs_grad(b.re) || needs_grad(b.im);
    Tensor dar(ar_v.shape());
    Tensor dai(ar_v.shape());
    Tensor dbr(br_v.shape());
    Tensor dbi(br_v.shape());
    for (std::size_t r = 0; r < rows_a; ++r) {
      const std::size_t rb = r % rows_b;
      for (std::size_t k = 0; k < width; ++k) {
        const std::size_t i = r * width + k;
        const std::size_t j = rb * width + k;
        if (need_a) {
          dar[i] = gr[i] * br_v[j] + gi[i] * bi_v[j];
          dai[i] = -gr[i] * bi_v[j] + gi[i] * br_v[j];
        }
        if (need_b) {
          dbr[j] += gr[i] * ar_v[i] + gi[i] * ai_v[i];
          dbi[j] += -gr[i] * ai_v[i] + gi[i] * ar_v[i];
        }
      }
    }
    auto accumulate = [this](ValueId id, const Tensor& d) {
      if (!needs_grad(id)) return;
      Tensor& g = grad_mut(id);
      for (std::size_t i = 0; i < d.size(); ++i) g[i] += d[i];
    };
    accumulate(a.re, dar);
    accumulate(a.im, dai);
    accumulate(b.re, dbr);
    accumulate(b.im, dbi);
  });
  return {re_id, im_id};
}

CValue Tape::complex_affine(CValue z, ComplexParam& weight,
                            ComplexParam& bias) {
  const CValue w = param(weight);
  const CValue b = param(bias);
  const Tensor& zr = value(z.re);
  const Tensor& zi = value(z.im);
  require_same_shape(zr, zi, "complex_affine");
  const Tensor& wr = weight.re.value;
  const Tensor& wi = weight.im.value;
  if (wr.rank() != 2 || last_dim(zr) != wr.dim(0)) {
    throw ShapeError("complex_affine: input " + shape_string(zr.shape()) +
                     " does not match weight " + shape_string(wr.shape()));
  }
  const auto in = Eigen::Index(wr.dim(0));
  const auto out = Eigen::Index(wr.dim(1));
  if (bias.re.value.shape() != Shape{std::size_t(out)}) {
    throw ShapeError("complex_affine: bias shape mismatch");
  }
  const auto rows = Eigen::Index(zr.size() / std::size_t(in));
  Tensor er(with_last(zr.shape(), std::size_t(out)));
  Tensor ei(with_last(zr.shape(), std::size_t(out)));
  {
    Eigen::Map<const RowMat> zr_m(zr.data().data(), rows, in);
    Eigen::Map<const RowMat> zi_m(zi.data().data(), rows, in);
    Eigen::Map<const RowMat> wr_m(wr.data().data(), in, out);
    Eigen::Map<const RowMat> wi_m(wi.data().data(), in, out);
    Eigen::Map<RowMat> er_m(er.data().data(), rows, out);
    Eigen::Map<RowMat> ei_m(ei.data().data(), rows, out);
    er_m.noalias() = zr_m * wr_m;
    er_m.noalias() -= zi_m * wi_m;
    ei_m.noalias() = zr_m * wi_m;
    ei_m.noalias() += zi_m * wr_m;
    er_m.rowwise() +=
        Eigen::Map<const RowVec>(bias.re.value.data().data(), out);
    ei_m.rowwise() +=
        Eigen::Map<const RowVec>(bias.im.value.data().data(), out);
  }
  const ValueId er_id = push_value(std::move(er), true);
  const ValueId ei_id = push_value(std::move(ei), true);
  add_node({z.re, z.im, w.re, w.im, b.re, b.im}, {er_id, ei_id}, [=, this] {
    if (!has_grad(er_id) && !has_grad(ei_id)) return;
    const Tensor gr_t = grad(er_id);
    const Tensor gi_t = grad(ei_id);
    Eigen::Map<const RowMat> gr(gr_t.data().data(), rows, out);
    Eigen::Map<const RowMat> gi(gi_t.data().data(), rows, out);
    const Tensor& zr_v = value(z.re);
    const Tensor& zi_v = value(z.im);
    Eigen::Map<const RowMat> zr_m(zr_v.data().data(), rows, in);
    Eigen::Map<const RowMat> zi_m(zi_v.data().data(), rows, in);
    const Tensor& wr_v = value(w.re);
    const Tensor& wi_v = value(w.im);
    Eigen::Map<const RowMat> wr_m(wr_v.data().data(), in, out);
    Eigen::Map<const RowMat> wi_m(wi_v.data().data(), in, out);
    {
      Eigen::Map<RowMat> dwr(grad_mut(w.re).data().data(), in, out);
      dwr.noalias() += zr_m.transpose() * gr;
      dwr.noalias() += zi_m.transpose() * gi;
    }
    {
      Eigen::Map<RowMat> dwi(grad_mut(w.im).data().data(), in, out);
      dwi.noalias() += zr_m.transpose() * gi;
      dwi.noalias() -= zi_m.transpose() * gr;
    }
    Eigen::Map<RowVec>(grad_mut(b.re).data().data(), out) += gr.colwise().sum();
    Eigen::Map<RowVec>(grad_mut(b.im).data().data(), out) += gi.colwise().sum();
    if (needs_grad(z.re)) {
      Eigen::Map<RowMat> dzr(grad_mut(z.re).data().data(), rows, in);
      dzr.noalias() += gr * wr_m.transpose();
      dzr.noalias() += gi * wi_m.transpose();
    }
    if (needs_grad(z.im)) {
      Eigen::Map<RowMat> dzi(grad_mut(z.im).data().data(), rows, in);
      dzi.noalias() += gi * wr_m.transpose();
      dzi.noalias() -= gr * wi_m.transpose();
    }
  });
  return {er_id, ei_id};
}

CValue Tape::split_activation(CValue a, Activation kind) {
  return {activation(a.re, kind), activation(a.im, kind)};
}

NormOutputs Tape::instance_norm(ValueId x_id, double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("instance_norm: epsilon must be > 0");
  const Tensor& x = value(x_id);
  const std::size_t len = last_dim(x);
  const std::size_t rows = x.size() / len;
  Tensor z(x.shape());
  Tensor mean(drop_last(x.shape()));
  Tensor stddev(drop_last(x.shape()));
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = x.data().data() + r * len;
    double mu = 0.0;
    for (std::size_t t = 0; t < len; ++t) mu += row[t];
    mu /= double(len);
    double var = 0.0;
    for (std::size_t t = 0; t < len; ++t) var += (row[t] - mu) * (row[t] - mu);
    var /= double(len);
    const double s = std::max(std::sqrt(var), epsilon);
    for (std::size_t t = 0; t < len; ++t) z[r * len + t] = (row[t] - mu) / s;
    mean[r] = mu;
    stddev[r] = s;
  }
  const bool ng = needs_grad(x_id);
  const ValueId z_id = push_value(std::move(z), ng);
  const ValueId m_id = push_value(std::move(mean), ng);
  const ValueId s_id = push_value(std::move(stddev), ng);
  add_node({x_id}, {z_id, m_id, s_id}, [=, this] {
    if (!needs_grad(x_id)) return;
    if (!has_grad(z_id) && !has_grad(m_id) && !has_grad(s_id)) return;
    const Tensor gz = grad(z_id);
    const Tensor gm = grad(m_id);
    const Tensor gs = grad(s_id);
    const Tensor& xv = value(x_id);
    const Tensor& zv = value(z_id);
    const Tensor& sv = value(s_id);
    Tensor& gx = grad_mut(x_id);
    for (std::size_t r = 0; r < rows; ++r) {
      const double s = sv[r];
      // Raw (unclamped) std decides whether the clamp is active.
      double mu = 0.0;
      for (std::size_t t = 0; t < len; ++t) mu += xv[r * len + t];
      mu /= double(len);
      double var = 0.0;
      for (std::size_t t = 0; t < len; ++t) {
        const double d = xv[r * len + t] - mu;
        var += d * d;
      }
      const double raw_std = std::sqrt(var / double(len));
      const bool clamped = !(raw_std > epsilon);
      double sum_gz = 0.0;
      double sum_gz_z = 0.0;
      for (std::size_t t = 0; t < len; ++t) {
        sum_gz += gz[r * len + t];
        sum_gz_z += gz[r * len + t] * zv[r * len + t];
      }
      const double d_std = gs[r] - sum_gz_z / s;
      const double d_mean = gm[r] - sum_gz / s;
      for (std::size_t t = 0; t < len; ++t) {
        const std::size_t i = r * len + t;
        double g = gz[i] / s + d_mean / double(len);
        if (!clamped) {
          g += d_std * (xv[i] - mu) / (double(len) * raw_std);
        }
        gx[i] += g;
      }
    }
  });
  return {z_id, m_id, s_id};
}

ValueId Tape::inverse_norm(ValueId p_id, ValueId m_id, ValueId s_id) {
  const Tensor& p = value(p_id);
  const Tensor& mean = value(m_id);
  const Tensor& stddev = value(s_id);
  const std::size_t len = last_dim(p);
  const std::size_t rows = p.size() / len;
  if (mean.size() != rows || stddev.size() != rows) {
    throw ShapeError("inverse_norm: statistics for " +
                     std::to_string(mean.size()) + " rows, predictions have " +
                     std::to_string(rows));
  }
  Tensor y(p.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t t = 0; t < len; ++t) {
      y[r * len + t] = p[r * len + t] * stddev[r] + mean[r];
    }
  }
  const ValueId y_id =
      push_value(std::move(y), any_needs_grad({p_id, m_id, s_id}));
  add_node({p_id, m_id, s_id}, {y_id}, [=, this] {
    if (!has_grad(y_id)) return;
    const Tensor& g = grad_ref(y_id);
    const Tensor& pv = value(p_id);
    const Tensor& sv = value(s_id);
    Tensor* gp = needs_grad(p_id) ? &grad_mut(p_id) : nullptr;
    Tensor* gm = needs_grad(m_id) ? &grad_mut(m_id) : nullptr;
    Tensor* gs = needs_grad(s_id) ? &grad_mut(s_id) : nullptr;
    for (std::size_t r = 0; r < rows; ++r) {
      double sum_g = 0.0;
      double sum_gp = 0.0;
      for (std::size_t t = 0; t < len; ++t) {
        const std::size_t i = r * len + t;
        if (gp != nullptr) (*gp)[i] += g[i] * sv[r];
        sum_g += g[i];
        sum_gp += g[i] * pv[i];
      }
      if (gm != nullptr) (*gm)[r] += sum_g;
      if (gs != nullptr) (*gs)[r] += sum_gp;
    }
  });
  return y_id;
}

std::vector<std::size_t> Tape::schedule(Order order) const {
  std::vector<std::size_t> out;
  out.reserve(nodes_.size());
  if (order == Order::kReverse) {
    for (std::size_t i = nodes_.size(); i-- > 0;) out.push_back(i);
    return out;
  }
  // A node may run once every node consuming one of its outputs has run.
  std::vector<std::size_t> producer(slots_.size(), nodes_.size());
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    for (ValueId v : nodes_[n].outputs) producer[v] = n;
  }
  std::vector<std::size_t> pending(nodes_.size(), 0);
  std::vector<std::vector<std::size_t>> feeds(nodes_.size());
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    for (ValueId v : nodes_[n].inputs) {
      const std::size_t p = producer[v];
      if (p == nodes_.size()) continue;
      ++pending[p];
      feeds[n].push_back(p);
    }
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>>
      ready;
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    if (pending[n] == 0) ready.push(n);
  }
  while (!ready.empty()) {
    const std::size_t n = ready.top();
    ready.pop();
    out.push_back(n);
    for (std::size_t p : feeds[n]) {
      if (--pending[p] == 0) ready.push(p);
    }
  }
  return out;
}

void Tape::backward(ValueId out, const Tensor& seed, Order order) {
  if (seed.shape() != value(out).shape()) {
    throw ShapeError("backward: seed shape " + shape_string(seed.shape()) +
                     " does not match output " +
                     shape_string(value(out).shape()));
  }
  for (Slot& s : slots_) {
    s.has_grad = false;
    s.grad = Tensor();
  }
  Tensor& g = grad_mut(out);
  for (std::size_t i = 0; i < seed.size(); ++i) g[i] = seed[i];
  using Clock = std::chrono::steady_clock;
  for (std::size_t n : schedule(order)) {
    const auto start = Clock::now();
    nodes_[n].backward();
    stage_seconds_[nodes_[n].stage] +=
        std::chrono::duration<double>(Clock::now() - start).count();
  }
  for (std::size_t id = 0; id < slots_.size(); ++id) {
    Slot& s = slots_[id];
    if (s.param == nullptr || !s.has_grad) continue;
    Tensor& pg = s.param->grad;
    for (std::size_t i = 0; i < pg.size(); ++i) pg[i] += s.grad[i];
  }
}

}  // namespace filternet
