// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "embed/curation/curation.hpp"
#include "embed/narration/merge.hpp"
#include "embed/spatial/spatial.hpp"

namespace embed::pipeline {

/// Completion service settings. The bearer token is never read from the
/// config file; it comes from EMBED_LLM_TOKEN.
struct ServiceConfig {
  std::optional<std::string> url;              // falls back to EMBED_LLM_URL
  std::optional<std::filesystem::path> stub;   // canned responses, no network
  std::chrono::milliseconds timeout{30000};
  int concurrency = 8;
  int max_attempts = 3;
};

struct PipelineConfig {
  std::filesystem::path detections;
  std::filesystem::path narrations;
  std::optional<std::filesystem::path> videos;
  std::optional<std::filesystem::path> captions;
  std::optional<std::filesystem::path> ego_narrations;
  std::optional<std::filesystem::path> few_shot;
  std::filesystem::path output_dir;

  bool strict = true;
  int shards = 4;
  curation::CurateOptions curate;
  spatial::CropOptions crop;
  double align_threshold = 0.5;
  double ppl_max = 10.0;
  narration::MergePolicy merge_policy = narration::MergePolicy::both;
  std::uint64_t seed = 7;
  ServiceConfig service;
};

/// Parses a JSON config. Relative paths resolve against `base_dir`.
/// Unknown keys, wrong types and out-of-range values raise ConfigError.
PipelineConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);

/// Reads and parses a config file; relative paths resolve against its
/// directory.
PipelineConfig load_config(const std::filesystem::path& path);

/// Checks that every input path exists. Runs before any stage does work.
void check_inputs(const PipelineConfig& config);

}  // namespace embed::pipeline
