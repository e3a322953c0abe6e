// Copyright 2026 The FilterNet Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef FILTERNET_COMMON_DIGEST_HPP_
#define FILTERNET_COMMON_DIGEST_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace filternet {

// Incremental 64-bit FNV-1a hash. Used for checkpoint checksums and output
// digests in run metadata; not a cryptographic hash.
class Fnv1a64 {
 public:
  void update(std::span<const std::byte> bytes);
  void update(std::string_view text);
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::uint64_t fnv1a64(std::span<const std::byte> bytes);

// Digest of a whole file as 16 lowercase hex digits.
std::string file_digest_hex(const std::string& path);

std::string to_hex(std::uint64_t value);

}  // namespace filternet

#endif  // FILTERNET_COMMON_DIGEST_HPP_
