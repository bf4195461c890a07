// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/core/manifest.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "embed/core/numeric.hpp"

namespace embed::core {

bool canonical_less(const ManifestEntry& a, const ManifestEntry& b) {
  auto key = [](const ManifestEntry& e) {
    return std::tie(e.clip.video_id, e.clip.start_s, e.narration.timestamp_s, e.clip.end_s,
                    e.domain, e.narration.source, e.narration.text);
  };
  return key(a) < key(b);
}

void canonical_sort(std::vector<ManifestEntry>& entries) {
  std::stable_sort(entries.begin(), entries.end(), canonical_less);
}

ManifestStats compute_stats(std::span<const ManifestEntry> entries) {
  ManifestStats stats;
  std::set<std::string> ego_videos;
  std::set<std::string> exo_videos;
  for (const auto& e : entries) {
    stats.of(e.domain).pair_count++;
    (e.domain == Domain::ego ? ego_videos : exo_videos).insert(e.clip.video_id);
  }
  stats.ego.video_count = static_cast<std::int64_t>(ego_videos.size());
  stats.exo_ego.video_count = static_cast<std::int64_t>(exo_videos.size());
  return stats;
}

double mean_frame_terms(std::span<const FrameTerm> terms) {
  if (terms.empty()) return 0.0;
  std::vector<double> sums;
  sums.reserve(terms.size());
  for (const auto& t : terms) sums.push_back(t.hoi_indicator + t.avg_hand_prob);
  return pairwise_sum(sums) / static_cast<double>(terms.size());
}

}  // namespace embed::core
