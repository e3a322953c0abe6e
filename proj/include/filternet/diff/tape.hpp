// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_DIFF_TAPE_HPP_
#define FILTERNET_DIFF_TAPE_HPP_

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "filternet/diff/tensor.hpp"

namespace filternet {

enum class Activation { kRelu, kGelu, kIdentity };

Activation parse_activation(std::string_view name);
std::string_view activation_name(Activation kind);
double activate(Activation kind, double v);
double activate_derivative(Activation kind, double v);

using ValueId = std::size_t;

// Handle to a complex value on the tape (two real values).
struct CValue {
  ValueId re = 0;
  ValueId im = 0;
};

struct NormOutputs {
  ValueId normalized = 0;  // [..., L]
  ValueId mean = 0;        // [...]
  ValueId stddev = 0;      // [...], clamped below by epsilon
};

// Record of one forward evaluation of a fixed computation graph. Each
// primitive computes its forward value immediately and registers a
// vector-Jacobian product; backward() replays those in reverse topological
// order and accumulates parameter gradients into Param::grad.
//
// A tape references the Params bound to it and must not outlive them.
class Tape {
 public:
  enum class Order {
    kReverse,   // reverse creation order
    kKahnLowestFirst,  // Kahn's algorithm, lowest ready node index first
  };

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaf holding a copy of `value`. Gradients are kept only if requested.
  ValueId input(Tensor value, bool requires_grad = false);
  // Leaf bound to a parameter (no copy). backward() adds into p.grad.
  ValueId param(Param& p);
  CValue param(ComplexParam& p);

  // y = x W + b over the last axis. x: [..., in], W: [in, out], b: [out].
  ValueId affine(ValueId x, Param& weight, Param* bias);
  ValueId activation(ValueId x, Activation kind);

  // Half-spectrum transform along the last axis: [..., L] -> [..., L/2+1].
  CValue rfft(ValueId x);
  // Inverse of rfft along the last axis: [..., L/2+1] -> [..., L].
  ValueId irfft(CValue s, std::size_t length);
  // Real part of the full-length inverse DFT along the last axis (1/D
  // scaling), no symmetry assumed: [..., D] -> [..., D].
  ValueId inverse_dft_real(CValue s);

  // Elementwise complex product. b's row count must divide a's; row r of a
  // pairs with row (r mod rows_b) of b, where rows run over the last axis.
  CValue complex_mul(CValue a, CValue b);
  // z W + b with complex W: [F, D] and complex b: [D].
  CValue complex_affine(CValue z, ComplexParam& weight, ComplexParam& bias);
  // Independent nonlinearity on real and imaginary parts.
  CValue split_activation(CValue a, Activation kind);

  // Per-row z-scoring along the last axis with population std clamped to
  // at least epsilon.
  NormOutputs instance_norm(ValueId x, double epsilon);
  // p * std + mean per row. p: [..., tau], mean/std: [...].
  ValueId inverse_norm(ValueId p, ValueId mean, ValueId stddev);

  // Nodes recorded while a stage is active are timed under it in
  // backward(). Callers add the forward time they measure themselves.
  static constexpr std::size_t kStages = 4;
  void set_stage(std::size_t stage) { stage_ = stage; }
  std::size_t stage() const { return stage_; }
  void add_stage_seconds(std::size_t stage, double seconds) {
    stage_seconds_.at(stage) += seconds;
  }
  double stage_seconds(std::size_t stage) const { return stage_seconds_.at(stage); }

  const Tensor& value(ValueId id) const;
  // Gradient of the value after backward(); zeros if none reached it.
  Tensor grad(ValueId id) const;
  std::size_t node_count() const { return nodes_.size(); }

  // Seeds d(out) = seed and propagates to every value that needs a gradient.
  void backward(ValueId out, const Tensor& seed, Order order = Order::kReverse);

 private:
  struct Slot {
    Tensor own;
    const Tensor* external = nullptr;
    Param* param = nullptr;
    Tensor grad;
    bool has_grad = false;
    bool needs_grad = false;
  };
  struct Node {
    std::vector<ValueId> inputs;
    std::vector<ValueId> outputs;
    std::function<void()> backward;
    std::size_t stage = 0;
  };

  ValueId push_value(Tensor value, bool needs_grad);
  bool needs_grad(ValueId id) const { return slots_[id].needs_grad; }
  bool any_needs_grad(std::initializer_list<ValueId> ids) const;
  bool has_grad(ValueId id) const { return slots_[id].has_grad; }
  const Tensor& grad_ref(ValueId id) const { return slots_[id].grad; }
  Tensor& grad_mut(ValueId id);
  void add_node(std::vector<ValueId> inputs, std::vector<ValueId> outputs,
                std::function<void()> backward);
  std::vector<std::size_t> schedule(Order order) const;

  std::vector<Slot> slots_;
  std::vector<Node> nodes_;
  std::size_t stage_ = 0;
  std::array<double, kStages> stage_seconds_{};
};

}  // namespace filternet

#endif  // FILTERNET_DIFF_TAPE_HPP_
