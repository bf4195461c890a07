// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "embed/curation/curation.hpp"
#include "embed/narration/completion.hpp"
#include "embed/narration/filters.hpp"
#include "embed/narration/merge.hpp"
#include "embed/narration/rephrase.hpp"
#include "embed/spatial/spatial.hpp"

// One function per CLI subcommand. Each reads its inputs from disk, writes
// its artifacts atomically and returns a report of record counts.
namespace embed::pipeline {

namespace fs = std::filesystem;
using Report = nlohmann::json;

struct IngestArgs {
  fs::path detections;
  fs::path narrations;
  std::optional<fs::path> videos;
  bool strict = true;
  int shards = 4;
  fs::path out_dir;
};
Report ingest_stage(const IngestArgs& args);

struct CurateArgs {
  fs::path index_dir;
  curation::CurateOptions options;
  fs::path out;  // scored.jsonl
};
Report curate_stage(const CurateArgs& args);

struct CropArgs {
  fs::path scored;
  spatial::CropOptions options;
  fs::path out;  // cropped.jsonl
};
Report crop_stage(const CropArgs& args);

struct RephraseArgs {
  fs::path clips;  // cropped.jsonl; its paired narrations are the input
  double align_threshold = narration::kDefaultAlignThreshold;
  narration::RephraseOptions options;
  fs::path out;  // rephrased.jsonl
};
/// Alignability filter, then few-shot rephrasing. Output-quality failures
/// are dropped and counted; a failing service halts with ServiceError.
Report rephrase_stage(const RephraseArgs& args, narration::CompletionClient& client);

struct CaptionArgs {
  fs::path captions;
  double ppl_max = 10.0;
  bool strict = true;
  fs::path out;  // generated.jsonl
};
Report captions_stage(const CaptionArgs& args);

struct MergeArgs {
  fs::path clips;
  std::optional<fs::path> rephrased;
  std::optional<fs::path> generated;
  narration::MergePolicy policy = narration::MergePolicy::both;
  fs::path out;  // exo_ego manifest
};
Report merge_stage(const MergeArgs& args);

struct AssembleArgs {
  std::optional<fs::path> ego_manifest;
  std::optional<fs::path> ego_narrations;  // raw records, filtered here
  std::optional<fs::path> exo_manifest;
  int frames_per_clip = curation::kDefaultFramesPerClip;
  fs::path out;
};
Report assemble_stage(const AssembleArgs& args);

struct SampleArgs {
  fs::path manifest;
  std::size_t batch_size = 1024;
  std::uint64_t seed = 0;
  std::uint64_t steps = 1;
  std::optional<double> ego_fraction;
  fs::path out;
};
Report sample_stage(const SampleArgs& args);

/// Record files shared between stages.
std::vector<core::NarrationRecord> read_narrations(const fs::path& path);
void write_narrations(const fs::path& path, std::span<const core::NarrationRecord> records);
std::vector<curation::CuratedClip> read_curated(const fs::path& path);
void write_curated(const fs::path& path, std::span<const curation::CuratedClip> clips);

/// Writes a report as indented JSON with a trailing newline.
void write_report(const fs::path& path, const Report& report);

}  // namespace embed::pipeline
