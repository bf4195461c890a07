// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace embed::narration {

struct CompletionRequest {
  std::string prompt;
  int max_tokens = 64;
  double temperature = 0.0;
  std::vector<std::string> stop;
};

struct CompletionResponse {
  std::string text;
  std::optional<std::vector<double>> token_logprobs;
};

// Wire format: {"prompt","max_tokens","temperature","stop"} and
// {"text","token_logprobs"?}.
nlohmann::json to_wire(const CompletionRequest& request);
CompletionRequest request_from_wire(const nlohmann::json& j);
nlohmann::json to_wire(const CompletionResponse& response);
CompletionResponse response_from_wire(const nlohmann::json& j);

/// Single-turn text completion service. Implementations must be safe to
/// call from several threads. Failures raise ServiceError, flagged
/// transient when a retry may succeed.
class CompletionClient {
 public:
  virtual ~CompletionClient() = default;
  virtual CompletionResponse complete(const CompletionRequest& request) = 0;
};

/// Deterministic offline client. Looks up the prompt's final "User: " line
/// in a canned table; unknown queries are echoed back unchanged.
class StubCompletionClient : public CompletionClient {
 public:
  StubCompletionClient() = default;
  explicit StubCompletionClient(std::map<std::string, std::string> canned)
      : canned_(std::move(canned)) {}

  /// Loads {"input": "...", "output": "..."} lines.
  static StubCompletionClient from_file(const std::string& path);

  CompletionResponse complete(const CompletionRequest& request) override;

  /// The text after the last "User: " line of a rendered prompt.
  static std::string query_of(const std::string& prompt);

 private:
  std::map<std::string, std::string> canned_;
};

/// Adapts a callable; handy for fault injection in tests.
class FunctionCompletionClient : public CompletionClient {
 public:
  using Fn = std::function<CompletionResponse(const CompletionRequest&)>;
  explicit FunctionCompletionClient(Fn fn) : fn_(std::move(fn)) {}
  CompletionResponse complete(const CompletionRequest& request) override { return fn_(request); }

 private:
  Fn fn_;
};

/// POSTs the wire request as JSON to `url` (http only), with an optional
/// bearer token. Connection failures, 429 and 5xx are transient.
class HttpCompletionClient : public CompletionClient {
 public:
  HttpCompletionClient(std::string url, std::string token,
                       std::chrono::milliseconds timeout = std::chrono::seconds(30));

  /// Reads EMBED_LLM_URL and EMBED_LLM_TOKEN; nullopt when the URL is unset.
  static std::optional<HttpCompletionClient> from_env();

  CompletionResponse complete(const CompletionRequest& request) override;

  const std::string& base() const { return base_; }
  const std::string& path() const { return path_; }

 private:
  std::string base_;  // scheme://host[:port]
  std::string path_;
  std::string token_;
  std::chrono::milliseconds timeout_;
};

}  // namespace embed::narration
