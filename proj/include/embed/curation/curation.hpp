// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "embed/core/types.hpp"
#include "embed/ingest/ingest.hpp"

namespace embed::curation {

inline constexpr double kDefaultClipLen = 5.0;
inline constexpr int kDefaultFramesPerClip = 4;
inline constexpr double kMinTailClip = 1.0;
inline constexpr double kNarrationHalfWidth = 2.5;
inline constexpr double kDefaultBudgetFraction = 0.6;

/// Tiles [0, duration) into contiguous windows [i·L, (i+1)·L). A trailing
/// partial window is kept when it spans at least `min_tail_s`.
std::vector<core::ClipRecord> segment_video(const std::string& video_id, double video_duration_s,
                                            double clip_len_s = kDefaultClipLen,
                                            double min_tail_s = kMinTailClip);

/// Uniform midpoint targets start + (i + 0.5)·len/k, i = 0..k-1.
std::vector<double> frame_targets(const core::ClipRecord& clip, int k = kDefaultFramesPerClip);

/// One sampled slot of a clip: the target time and the detection frame it
/// snapped to, if any.
struct FrameSlot {
  double target_s = 0.0;
  std::optional<core::FrameDetections> frame;

  double time() const { return frame ? frame->timestamp_s : target_s; }
};

/// Snaps each midpoint target to the nearest detection frame inside the
/// slot's own window [start + i·len/k, start + (i+1)·len/k). Windows are
/// disjoint, so a frame feeds at most one slot. Nearest wins; equal distance
/// prefers the earlier frame. Slots with no frame in their window stay
/// empty. `video_frames` must be time-sorted.
std::vector<FrameSlot> sample_frames(const core::ClipRecord& clip,
                                     std::span<const core::FrameDetections> video_frames,
                                     int k = kDefaultFramesPerClip);

/// Slot times, usable as a clip's frame_refs (strictly increasing).
std::vector<double> slot_times(std::span<const FrameSlot> slots);

/// HOI(f): at least one hand in contact and at least one object box.
int hoi_indicator(const core::FrameDetections& frame);
/// AVG_HP(f): mean hand probability, 0 when no hands were detected.
double avg_hand_prob(const core::FrameDetections& frame);

/// Clip relevance: mean over frame slots of HOI(f) + AVG_HP(f). Empty slots
/// contribute 0. Returns the clip with its score and per-frame terms.
core::ScoredClip hoi_score(const core::ClipRecord& clip, std::span<const FrameSlot> slots);
core::ScoredClip hoi_score(const core::ClipRecord& clip,
                           std::span<const core::FrameDetections> frames);

/// Either an absolute clip count or a fraction of the candidates.
struct Budget {
  std::variant<std::size_t, double> value;

  static Budget count(std::size_t n) { return {n}; }
  static Budget fraction(double f) { return {f}; }

  /// Parses "250" as a count and "0.6" (anything with a '.', or below 1)
  /// as a fraction. Throws ConfigError on nonpositive or malformed input.
  static Budget parse(const std::string& text);

  /// Number of clips to keep out of `available`.
  std::size_t resolve(std::size_t available) const;
};

enum class RankScope { global, per_video };

/// Descending hoi_score, ties by (video_id, start_s) ascending. Returns
/// exactly min(budget, |scored|) clips; output depends only on the input
/// multiset.
std::vector<core::ScoredClip> select_top_clips(std::span<const core::ScoredClip> scored,
                                               const Budget& budget,
                                               RankScope scope = RankScope::global);

/// Strict ranking order used by select_top_clips.
bool rank_before(const core::ScoredClip& a, const core::ScoredClip& b);

struct ClipPairing {
  core::ClipRecord clip;
  std::vector<core::NarrationRecord> narrations;

  bool paired() const { return !narrations.empty(); }
};

/// Half-open interval membership: n pairs with c iff n.t ∈ [c.start, c.end).
/// Clips are assumed pairwise disjoint per video; a narration joins the
/// first covering clip only. Unpaired clips are kept with no narrations.
std::vector<ClipPairing> pair_narrations(std::span<const core::ClipRecord> clips,
                                         std::span<const core::NarrationRecord> narrations);

/// Clip [max(0, t − half_width), t + half_width) around a narration, with no
/// frame refs yet.
core::ClipRecord narration_centered_clip(const core::NarrationRecord& narration,
                                         double half_width = kNarrationHalfWidth);

enum class PairingMode { uniform, narration_centered };

struct CurateOptions {
  double clip_len_s = kDefaultClipLen;
  int frames_per_clip = kDefaultFramesPerClip;
  double min_tail_s = kMinTailClip;
  Budget budget = Budget::fraction(kDefaultBudgetFraction);
  PairingMode mode = PairingMode::uniform;
  RankScope scope = RankScope::global;
  double half_width_s = kNarrationHalfWidth;
  int workers = 1;
};

/// A selected clip carrying everything later stages need.
struct CuratedClip {
  core::ScoredClip scored;
  std::vector<std::optional<core::FrameDetections>> frames;  // one per slot
  std::vector<core::NarrationRecord> narrations;
  std::optional<core::BoundingBox> crop_region;
  std::vector<std::optional<core::BoundingBox>> frame_crop_regions;  // per-frame mode only
  int frame_width = 0;
  int frame_height = 0;

  bool paired() const { return !narrations.empty(); }
  friend bool operator==(const CuratedClip&, const CuratedClip&) = default;
};

struct CurateReport {
  std::size_t videos = 0;
  std::size_t candidate_clips = 0;
  std::size_t selected_clips = 0;
  std::size_t paired_clips = 0;
  std::size_t unpaired_clips = 0;
  std::size_t paired_narrations = 0;
};

struct CurateResult {
  std::vector<CuratedClip> clips;  // ranking order
  CurateReport report;
};

/// Full temporal selection: segment (or centre on narrations), sample,
/// score in parallel, select, and pair. Output is identical for any
/// worker count.
CurateResult curate(const ingest::CorpusIndex& index, const CurateOptions& options);

/// Line codec for scored.jsonl / cropped.jsonl records.
std::string encode_curated(const CuratedClip& clip);
CuratedClip decode_curated(std::string_view line);

}  // namespace embed::curation
