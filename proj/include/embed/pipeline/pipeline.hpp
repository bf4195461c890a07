// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "embed/narration/completion.hpp"
#include "embed/pipeline/config.hpp"
#include "embed/pipeline/log.hpp"

namespace embed::pipeline {

/// Stable process exit codes, one per failure class.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitIo = 3,
  kExitData = 4,
  kExitService = 5,
  kExitVerification = 6,
};

/// Maps the in-flight exception to its exit code. Call inside a catch block.
int exit_code_for_current_exception();

struct RunOptions {
  bool resume = false;
  std::optional<int> workers;  // overrides the config value
  // Replaces the client the config would build; not owned.
  narration::CompletionClient* client = nullptr;
};

/// Hash of a file's bytes.
std::string file_digest(const std::filesystem::path& path);
/// Hash over the names and bytes of every regular file directly in `dir`.
std::string dir_digest(const std::filesystem::path& dir);

/// Builds the completion client the config asks for: the stub when
/// stub_responses is set, otherwise HTTP against service.url or
/// EMBED_LLM_URL. ConfigError when neither is available.
std::unique_ptr<narration::CompletionClient> make_client(const ServiceConfig& service);

/// Runs ingest → curate → crop → narrate → assemble under
/// config.output_dir. Each stage is keyed by a hash of its config subset and
/// input bytes; with `resume`, a stage whose key and outputs are unchanged
/// is skipped and its stored report reused. Returns the run report, also
/// written to run_report.json. Failures are rethrown with the stage name
/// prefixed, keeping their error class.
nlohmann::json run_pipeline(const PipelineConfig& config, const RunOptions& options, Logger& log);

}  // namespace embed::pipeline
