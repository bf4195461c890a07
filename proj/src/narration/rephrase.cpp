// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/narration/rephrase.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <thread>
#include <variant>

#include "embed/core/errors.hpp"
#include "embed/ingest/ingest.hpp"

namespace embed::narration {

using core::NarrationRecord;

namespace {

std::string_view trim(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string single_line(std::string_view s) {
  std::string out(s);
  std::replace_if(out.begin(), out.end(), [](char c) { return c == '\n' || c == '\r'; }, ' ');
  return out;
}

}  // namespace

std::string clean_completion(std::string_view text) {
  text = trim(text);
  for (std::string_view role : {"Assistant:", "User:", "System:"}) {
    if (text.starts_with(role)) {
      text.remove_prefix(role.size());
      text = trim(text);
      break;
    }
  }
  return std::string(text);
}

NarrationRecord rephrase(const NarrationRecord& exo, CompletionClient& client,
                         const RephraseOptions& options) {
  const auto prompt =
      build_rephrase_prompt(single_line(trim(exo.text)), options.few_shot_pairs, options.instruction);
  CompletionRequest request{prompt.render(), options.max_tokens, options.temperature, options.stop};

  std::optional<CompletionResponse> response;
  auto backoff = options.base_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      response = client.complete(request);
      break;
    } catch (const ServiceError& e) {
      if (!e.transient() || attempt >= options.max_attempts) throw;
    }
    if (backoff.count() > 0) std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }

  const auto text = clean_completion(response->text);
  if (text.empty()) throw DataError("empty completion");
  if (ingest::token_count(text) > kMaxRephraseTokens)
    throw DataError("degenerate completion longer than " + std::to_string(kMaxRephraseTokens) +
                    " tokens");

  NarrationRecord out = exo;
  out.text = text;
  out.source = core::NarrationSource::rephrased;
  out.perplexity.reset();
  out.generation_meta["original_text"] = exo.text;
  out.generation_meta["original_source"] = std::string(core::to_string(exo.source));
  if (text == trim(exo.text)) out.generation_meta["unchanged"] = true;
  return out;
}

RephraseBatch rephrase_all(std::span<const NarrationRecord> narrations, CompletionClient& client,
                           const RephraseOptions& options) {
  using Outcome = std::variant<NarrationRecord, RephraseFailure>;
  std::vector<Outcome> outcomes(narrations.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < narrations.size(); i = next++) {
      try {
        outcomes[i] = rephrase(narrations[i], client, options);
      } catch (const ServiceError& e) {
        outcomes[i] = RephraseFailure{narrations[i], e.what(), true};
      } catch (const Error& e) {
        outcomes[i] = RephraseFailure{narrations[i], e.what(), false};
      }
    }
  };
  const auto workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, options.concurrency)),
                                               1, std::max<std::size_t>(1, narrations.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }

  RephraseBatch batch;
  for (std::size_t i = 0; i < narrations.size(); ++i) {
    if (auto* ok = std::get_if<NarrationRecord>(&outcomes[i])) batch.rephrased.push_back(std::move(*ok));
    else batch.failures.push_back(std::move(std::get<RephraseFailure>(outcomes[i])));
  }
  return batch;
}

}  // namespace embed::narration
