// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/narration/merge.hpp"

#include <map>
#include <tuple>

#include "embed/core/manifest.hpp"
#include "embed/narration/captions.hpp"

namespace embed::narration {

using core::NarrationRecord;

std::optional<MergePolicy> parse_merge_policy(std::string_view s) {
  if (s == "both") return MergePolicy::both;
  if (s == "prefer_rephrased") return MergePolicy::prefer_rephrased;
  if (s == "prefer_generated") return MergePolicy::prefer_generated;
  return std::nullopt;
}

const char* to_string(MergePolicy policy) {
  switch (policy) {
    case MergePolicy::both: return "both";
    case MergePolicy::prefer_rephrased: return "prefer_rephrased";
    case MergePolicy::prefer_generated: return "prefer_generated";
  }
  return "both";
}

std::vector<NarrationRecord> merge_narrations(std::span<const NarrationRecord> rephrased,
                                              std::span<const NarrationRecord> generated,
                                              MergePolicy policy) {
  std::vector<NarrationRecord> out;
  auto append = [&](std::span<const NarrationRecord> s) { out.insert(out.end(), s.begin(), s.end()); };
  switch (policy) {
    case MergePolicy::both:
      append(rephrased);
      append(generated);
      break;
    case MergePolicy::prefer_rephrased:
      append(rephrased.empty() ? generated : rephrased);
      break;
    case MergePolicy::prefer_generated:
      append(generated.empty() ? rephrased : generated);
      break;
  }
  return out;
}

namespace {

using NarrationKey = std::tuple<std::string, double, std::string>;
using IntervalKey = std::tuple<std::string, double, double>;

std::string original_text(const NarrationRecord& n) {
  if (auto it = n.generation_meta.find("original_text"); it != n.generation_meta.end()) {
    if (auto* s = std::get_if<std::string>(&it->second)) return *s;
  }
  return n.text;
}

}  // namespace

std::vector<core::ManifestEntry> build_exo_ego_entries(std::span<const curation::CuratedClip> clips,
                                                       std::span<const NarrationRecord> rephrased,
                                                       std::span<const NarrationRecord> generated,
                                                       MergePolicy policy, ExoEgoReport* report) {
  std::map<NarrationKey, std::size_t> by_original;
  std::map<IntervalKey, std::size_t> by_interval;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    const auto& clip = clips[i].scored.clip;
    for (const auto& n : clips[i].narrations) by_original.emplace(NarrationKey{n.video_id, n.timestamp_s, n.text}, i);
    by_interval.emplace(IntervalKey{clip.video_id, clip.start_s, clip.end_s}, i);
  }

  std::vector<std::vector<NarrationRecord>> rep(clips.size()), gen(clips.size());
  ExoEgoReport local;
  for (const auto& r : rephrased) {
    auto it = by_original.find({r.video_id, r.timestamp_s, original_text(r)});
    if (it != by_original.end()) rep[it->second].push_back(r);
  }
  for (const auto& g : generated) {
    auto interval = caption_interval(g);
    auto it = interval ? by_interval.find({g.video_id, interval->start_s, interval->end_s})
                       : by_interval.end();
    if (it == by_interval.end()) {
      ++local.unmatched_captions;
      continue;
    }
    gen[it->second].push_back(g);
  }

  std::vector<core::ManifestEntry> entries;
  local.clips = clips.size();
  for (std::size_t i = 0; i < clips.size(); ++i) {
    const auto& c = clips[i];
    auto chosen = merge_narrations(rep[i], gen[i], policy);
    if (!chosen.empty()) ++local.clips_with_pairs;
    for (auto& n : chosen) {
      core::ManifestEntry e;
      e.clip = c.scored.clip;
      e.crop_region = c.crop_region;
      if (e.crop_region) {
        e.frame_width = c.frame_width;
        e.frame_height = c.frame_height;
      }
      e.domain = core::Domain::exo_ego;
      if (n.source == core::NarrationSource::rephrased) ++local.rephrased_pairs;
      else ++local.generated_pairs;
      e.narration = std::move(n);
      entries.push_back(std::move(e));
    }
  }
  core::canonical_sort(entries);
  if (report) *report = local;
  return entries;
}

}  // namespace embed::narration
