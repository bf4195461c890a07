// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "embed/core/types.hpp"

namespace embed::core {

/// Canonical total order: (video_id, start_s, narration.timestamp_s), then
/// end_s, domain, narration source and text to break remaining ties.
bool canonical_less(const ManifestEntry& a, const ManifestEntry& b);

void canonical_sort(std::vector<ManifestEntry>& entries);

/// Recounts per-domain distinct videos and pairs from scratch.
ManifestStats compute_stats(std::span<const ManifestEntry> entries);

/// Mean of (hoi_indicator + avg_hand_prob) over the terms; 0 for none.
double mean_frame_terms(std::span<const FrameTerm> terms);

}  // namespace embed::core
