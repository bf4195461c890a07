// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "embed/core/types.hpp"
#include "embed/ingest/ingest.hpp"

namespace embed::narration {

struct CaptionIngest {
  std::vector<core::NarrationRecord> records;
  ingest::IngestReport report;
};

/// Reads narrator output, one caption per line:
///   {"video_id","start_s","end_s","text","perplexity","generation_meta"?}
/// Each becomes a narrator_generated record stamped at the interval midpoint,
/// with clip_start_s / clip_end_s added to generation_meta. Lines without a
/// perplexity are rejected.
CaptionIngest ingest_narrator_captions(const std::filesystem::path& path, bool strict);

/// Caption interval recorded by ingest_narrator_captions.
struct CaptionInterval {
  double start_s = 0.0;
  double end_s = 0.0;
};
std::optional<CaptionInterval> caption_interval(const core::NarrationRecord& record);

}  // namespace embed::narration
