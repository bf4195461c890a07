// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

namespace embed::core {

/// 64-bit FNV-1a. Stable across platforms; used for shard assignment.
std::uint64_t fnv1a64(std::string_view bytes);

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view bytes);

/// Incremental SHA-256 for content-addressing several inputs.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  Sha256& update(std::string_view bytes);
  std::string hex_digest();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace embed::core
