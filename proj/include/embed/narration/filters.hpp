// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "embed/core/types.hpp"

namespace embed::narration {

inline constexpr double kDefaultAlignThreshold = 0.5;

struct AlignabilityResult {
  std::vector<core::NarrationRecord> kept;
  std::vector<core::NarrationRecord> dropped;
  // Records that arrived without a classifier score.
  std::vector<core::NarrationRecord> needs_scoring;
};

/// Keeps narrations whose alignability ≥ threshold. Input order is kept.
AlignabilityResult filter_alignability(std::span<const core::NarrationRecord> narrations,
                                       double threshold = kDefaultAlignThreshold);

struct PerplexityResult {
  std::vector<core::NarrationRecord> kept;
  std::vector<core::NarrationRecord> dropped;
};

/// Retains confident generations: kept iff perplexity ≤ max_perplexity.
/// Records without a perplexity are dropped.
PerplexityResult filter_perplexity(std::span<const core::NarrationRecord> records,
                                   double max_perplexity);

}  // namespace embed::narration
