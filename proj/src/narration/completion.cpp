// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/narration/completion.hpp"

#include <cstdlib>

#include <httplib.h>

#include "embed/core/errors.hpp"
#include "embed/core/json.hpp"
#include "embed/core/jsonl.hpp"

namespace embed::narration {

using nlohmann::json;

json to_wire(const CompletionRequest& r) {
  json j = json::object();
  j["prompt"] = r.prompt;
  j["max_tokens"] = r.max_tokens;
  j["temperature"] = r.temperature;
  j["stop"] = r.stop;
  return j;
}

CompletionRequest request_from_wire(const json& j) {
  try {
    CompletionRequest r;
    r.prompt = j.at("prompt").get<std::string>();
    r.max_tokens = j.value("max_tokens", 64);
    r.temperature = j.value("temperature", 0.0);
    r.stop = j.value("stop", std::vector<std::string>{});
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("bad completion request: ") + e.what());
  }
}

json to_wire(const CompletionResponse& r) {
  json j = json::object();
  j["text"] = r.text;
  if (r.token_logprobs) j["token_logprobs"] = *r.token_logprobs;
  return j;
}

CompletionResponse response_from_wire(const json& j) {
  try {
    CompletionResponse r;
    r.text = j.at("text").get<std::string>();
    if (auto it = j.find("token_logprobs"); it != j.end() && !it->is_null())
      r.token_logprobs = it->get<std::vector<double>>();
    return r;
  } catch (const json::exception& e) {
    throw ServiceError(std::string("bad completion response: ") + e.what(), false);
  }
}

// ---------------------------------------------------------------------------

StubCompletionClient StubCompletionClient::from_file(const std::string& path) {
  std::map<std::string, std::string> canned;
  core::JsonlReader reader(path);
  std::string line;
  while (reader.next(line)) {
    const auto j = core::parse_json_text(line);
    if (!j.is_object() || !j.contains("input") || !j.contains("output"))
      throw DataError("stub response must be {\"input\", \"output\"}", reader.source(),
                      reader.line_number());
    canned[j["input"].get<std::string>()] = j["output"].get<std::string>();
  }
  return StubCompletionClient(std::move(canned));
}

std::string StubCompletionClient::query_of(const std::string& prompt) {
  const std::string marker = "User: ";
  auto pos = prompt.rfind("\n" + marker);
  std::size_t start = pos == std::string::npos ? (prompt.rfind(marker, 0) == 0 ? 0 : std::string::npos)
                                               : pos + 1;
  if (start == std::string::npos) return prompt;
  start += marker.size();
  auto end = prompt.find('\n', start);
  return prompt.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

CompletionResponse StubCompletionClient::complete(const CompletionRequest& request) {
  const auto query = query_of(request.prompt);
  if (auto it = canned_.find(query); it != canned_.end()) return {it->second, std::nullopt};
  return {query, std::nullopt};
}

// ---------------------------------------------------------------------------

HttpCompletionClient::HttpCompletionClient(std::string url, std::string token,
                                           std::chrono::milliseconds timeout)
    : token_(std::move(token)), timeout_(timeout) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.substr(0, scheme_end) != "http")
    throw ConfigError("completion URL must start with http://: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  base_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (base_.size() <= scheme_end + 3) throw ConfigError("completion URL has no host: " + url);
}

std::optional<HttpCompletionClient> HttpCompletionClient::from_env() {
  const char* url = std::getenv("EMBED_LLM_URL");
  if (!url || !*url) return std::nullopt;
  const char* token = std::getenv("EMBED_LLM_TOKEN");
  return HttpCompletionClient(url, token ? token : "");
}

CompletionResponse HttpCompletionClient::complete(const CompletionRequest& request) {
  httplib::Client cli(base_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  cli.set_connection_timeout(secs.count(), usecs.count());
  cli.set_read_timeout(secs.count(), usecs.count());
  cli.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);

  auto res = cli.Post(path_, headers, to_wire(request).dump(), "application/json");
  if (!res) throw ServiceError("completion service unreachable: " + httplib::to_string(res.error()), true);
  if (res->status == 429 || res->status >= 500)
    throw ServiceError("completion service returned HTTP " + std::to_string(res->status), true);
  if (res->status != 200)
    throw ServiceError("completion service returned HTTP " + std::to_string(res->status), false);
  json body;
  try {
    body = json::parse(res->body);
  } catch (const json::parse_error& e) {
    throw ServiceError(std::string("completion response is not JSON: ") + e.what(), false);
  }
  return response_from_wire(body);
}

}  // namespace embed::narration
