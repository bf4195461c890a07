// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "embed/core/types.hpp"

namespace embed::ingest {

/// Optional per-video metadata (videos.jsonl). When absent, durations are
/// inferred from the latest observed timestamp.
struct VideoInfo {
  std::string video_id;
  double duration_s = 0.0;
  int frame_width = 0;
  int frame_height = 0;

  friend bool operator==(const VideoInfo&, const VideoInfo&) = default;
};

struct IngestReport {
  std::size_t lines = 0;
  std::size_t indexed = 0;
  std::size_t skipped = 0;
  std::size_t duplicates = 0;
  // First few rejected lines as "source:line: reason".
  std::vector<std::string> samples;

  void merge(const IngestReport& other);
};

/// Time-sorted per-video views of a corpus. Within a video, records are
/// ordered by timestamp and then by canonical encoding, so the index is a
/// function of the input multiset alone.
struct CorpusIndex {
  std::map<std::string, std::vector<core::FrameDetections>> detections_by_video;
  std::map<std::string, std::vector<core::NarrationRecord>> narrations_by_video;
  std::map<std::string, VideoInfo> videos;
  std::string source_tag;

  std::size_t detection_count() const;
  std::size_t narration_count() const;

  /// Ids of every video seen in any table, ascending.
  std::vector<std::string> video_ids() const;

  friend bool operator==(const CorpusIndex&, const CorpusIndex&) = default;
};

struct IngestResult {
  CorpusIndex index;
  IngestReport report;
};

/// Reads a detections.jsonl file. A leading {"schema_version": ...} line is
/// optional; a major-version mismatch always fails. Strict mode throws
/// DataError on the first bad line; lenient mode counts and skips it.
IngestResult ingest_detections(const std::filesystem::path& path, bool strict);

/// Reads a narrations.jsonl file. Duplicate (video_id, timestamp_s, text)
/// records are dropped and counted in report.duplicates.
IngestResult ingest_narrations(const std::filesystem::path& path, bool strict);

/// Reads videos.jsonl: {"video_id","duration_s","frame_width","frame_height"}.
IngestResult ingest_videos(const std::filesystem::path& path, bool strict);

/// Single-writer merge of a fragment into `into`; re-establishes ordering.
void merge_into(CorpusIndex& into, CorpusIndex&& fragment);

/// Duration used for segmentation: videos.jsonl when present, otherwise the
/// latest detection or narration timestamp rounded up to a whole number of
/// `clip_len_s` windows.
double video_duration(const CorpusIndex& index, const std::string& video_id, double clip_len_s);

/// Whitespace-delimited token count after trimming; punctuation is kept.
std::size_t token_count(std::string_view text);

struct EgoFilterReport {
  std::size_t input = 0;
  std::size_t kept = 0;
  std::size_t dropped_unsure = 0;
  std::size_t dropped_short = 0;
};

struct EgoFilterResult {
  std::vector<core::NarrationRecord> kept;
  std::vector<core::NarrationRecord> dropped;
  EgoFilterReport report;
};

inline constexpr std::size_t kMinEgoTokens = 4;

/// Drops narrations tagged "#unsure"/"#Unsure" (substring) and those with
/// fewer than four tokens. The tag rule is checked first, so a short tagged
/// narration counts toward dropped_unsure only.
EgoFilterResult filter_ego_narrations(std::span<const core::NarrationRecord> narrations);

/// Persists the index as sharded JSON Lines plus index.meta.json.
void save_index(const CorpusIndex& index, const std::filesystem::path& dir,
                const IngestReport& report, int shard_count = 4);

/// Loads an index written by save_index. Always strict.
CorpusIndex load_index(const std::filesystem::path& dir);

}  // namespace embed::ingest
