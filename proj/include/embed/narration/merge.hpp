// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "embed/core/types.hpp"
#include "embed/curation/curation.hpp"

namespace embed::narration {

enum class MergePolicy { both, prefer_rephrased, prefer_generated };

std::optional<MergePolicy> parse_merge_policy(std::string_view s);
const char* to_string(MergePolicy policy);

/// Narrations emitted for one clip. `both` is the union (rephrased first);
/// the prefer_* policies fall back to the other stream when theirs is empty.
std::vector<core::NarrationRecord> merge_narrations(std::span<const core::NarrationRecord> rephrased,
                                                    std::span<const core::NarrationRecord> generated,
                                                    MergePolicy policy = MergePolicy::both);

struct ExoEgoReport {
  std::size_t clips = 0;
  std::size_t clips_with_pairs = 0;
  std::size_t rephrased_pairs = 0;
  std::size_t generated_pairs = 0;
  std::size_t unmatched_captions = 0;
};

/// Builds exo_ego manifest entries. Rephrased narrations join the clip whose
/// interval contains their timestamp; generated captions join the clip with
/// the same (video_id, start_s, end_s). Entries come back in canonical order.
std::vector<core::ManifestEntry> build_exo_ego_entries(
    std::span<const curation::CuratedClip> clips,
    std::span<const core::NarrationRecord> rephrased,
    std::span<const core::NarrationRecord> generated, MergePolicy policy, ExoEgoReport* report = nullptr);

}  // namespace embed::narration
