// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_TRAIN_CHECKPOINT_HPP_
#define FILTERNET_TRAIN_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>

#include "filternet/data/frame.hpp"
#include "filternet/model/filternet.hpp"

namespace filternet {

struct TrainingMetadata {
  std::size_t epoch = 0;  // epoch that produced the stored parameters
  double val_loss = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;
};

struct Checkpoint {
  FilterNet model;
  data::Scaler scaler;  // may be empty
  TrainingMetadata meta;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout: "FLTN", u32 version, u64 header length, JSON header (config,
// metadata, tensor manifest), little-endian f64 tensors in manifest order,
// then the FNV-1a 64 digest of every preceding byte.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Throws CheckpointError when the stored architecture differs from
// `expected` (filter kind first, then the remaining fields).
void require_compatible(const Checkpoint& ckpt, const ModelConfig& expected);

}  // namespace filternet

#endif  // FILTERNET_TRAIN_CHECKPOINT_HPP_
