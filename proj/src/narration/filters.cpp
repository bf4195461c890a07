// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/narration/filters.hpp"

namespace embed::narration {

AlignabilityResult filter_alignability(std::span<const core::NarrationRecord> narrations,
                                       double threshold) {
  AlignabilityResult out;
  for (const auto& n : narrations) {
    if (!n.alignability) out.needs_scoring.push_back(n);
    else if (*n.alignability >= threshold) out.kept.push_back(n);
    else out.dropped.push_back(n);
  }
  return out;
}

PerplexityResult filter_perplexity(std::span<const core::NarrationRecord> records,
                                   double max_perplexity) {
  PerplexityResult out;
  for (const auto& r : records) {
    if (r.perplexity && *r.perplexity <= max_perplexity) out.kept.push_back(r);
    else out.dropped.push_back(r);
  }
  return out;
}

}  // namespace embed::narration
