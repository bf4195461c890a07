// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "embed/core/types.hpp"
#include "embed/narration/completion.hpp"
#include "embed/narration/prompt.hpp"

namespace embed::narration {

inline constexpr std::size_t kMaxRephraseTokens = 64;

struct RephraseOptions {
  std::string instruction = kRephraseInstruction;
  std::vector<FewShotPair> few_shot_pairs = default_few_shot_pairs();
  int max_attempts = 3;
  std::chrono::milliseconds base_backoff{200};
  int max_tokens = static_cast<int>(kMaxRephraseTokens);
  double temperature = 0.0;
  std::vector<std::string> stop = {"\n"};
  int concurrency = 8;
};

/// Removes a leading "Assistant:" / "User:" / "System:" role prefix and
/// surrounding whitespace from a completion.
std::string clean_completion(std::string_view text);

/// Rephrases one exocentric narration. The returned record has
/// source = rephrased, keeps the input's alignability, and records
/// original_text / original_source in generation_meta (plus unchanged=true
/// when the service returned the input verbatim). Transient service errors
/// are retried with exponential backoff up to max_attempts; the input
/// record is never modified. Throws ServiceError or DataError on failure.
core::NarrationRecord rephrase(const core::NarrationRecord& exo_narration,
                               CompletionClient& client, const RephraseOptions& options = {});

struct RephraseFailure {
  core::NarrationRecord input;
  std::string reason;
  bool service = false;  // the completion service failed, not the output
};

struct RephraseBatch {
  std::vector<core::NarrationRecord> rephrased;  // input order
  std::vector<RephraseFailure> failures;         // input order
};

/// Runs rephrase over many narrations with at most options.concurrency
/// requests in flight, restoring input order before returning.
RephraseBatch rephrase_all(std::span<const core::NarrationRecord> narrations,
                           CompletionClient& client, const RephraseOptions& options = {});

}  // namespace embed::narration
