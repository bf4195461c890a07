// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/pipeline/config.hpp"

#include <set>

#include "embed/core/errors.hpp"
#include "embed/core/jsonl.hpp"

namespace embed::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [k, _] : j.items())
    if (!known.contains(k)) throw ConfigError("unknown config key " + where + k);
}

template <typename T>
T get(const json& j, const std::string& key, const T& fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

std::optional<fs::path> get_path(const json& j, const std::string& key, const fs::path& base) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_string()) throw ConfigError("config key '" + key + "' must be a path string");
  fs::path p = j.at(key).get<std::string>();
  return p.is_absolute() ? p : base / p;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

curation::Budget parse_budget(const json& b) {
  if (b.is_number_unsigned() || b.is_number_integer()) {
    require(b.get<std::int64_t>() > 0, "budget count must be positive");
    return curation::Budget::count(b.get<std::size_t>());
  }
  if (b.is_number_float()) {
    const double f = b.get<double>();
    require(f > 0.0 && f <= 1.0, "budget fraction must lie in (0, 1]");
    return curation::Budget::fraction(f);
  }
  if (b.is_string()) return curation::Budget::parse(b.get<std::string>());
  throw ConfigError("budget must be a count, a fraction or a string");
}

}  // namespace

PipelineConfig parse_config(const json& j, const fs::path& base) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"inputs", "output_dir", "strict", "shards", "clip_len_s", "frames_per_clip",
                  "min_tail_s", "budget", "mode", "scope", "half_width_s", "margin", "hull_mode",
                  "align_threshold", "ppl_max", "merge_policy", "seed", "workers", "service"},
                 "");
  PipelineConfig c;

  const json inputs = get<json>(j, "inputs", json::object());
  require(inputs.is_object(), "'inputs' must be an object");
  reject_unknown(inputs,
                 {"detections", "narrations", "videos", "captions", "ego_narrations", "few_shot"},
                 "inputs.");
  auto detections = get_path(inputs, "detections", base);
  auto narrations = get_path(inputs, "narrations", base);
  auto output = get_path(j, "output_dir", base);
  require(detections.has_value(), "inputs.detections is required");
  require(narrations.has_value(), "inputs.narrations is required");
  require(output.has_value(), "output_dir is required");
  c.detections = *detections;
  c.narrations = *narrations;
  c.output_dir = *output;
  c.videos = get_path(inputs, "videos", base);
  c.captions = get_path(inputs, "captions", base);
  c.ego_narrations = get_path(inputs, "ego_narrations", base);
  c.few_shot = get_path(inputs, "few_shot", base);

  c.strict = get(j, "strict", c.strict);
  c.shards = get(j, "shards", c.shards);
  require(c.shards >= 1, "shards must be at least 1");

  auto& cu = c.curate;
  cu.clip_len_s = get(j, "clip_len_s", cu.clip_len_s);
  cu.frames_per_clip = get(j, "frames_per_clip", cu.frames_per_clip);
  cu.min_tail_s = get(j, "min_tail_s", cu.min_tail_s);
  cu.half_width_s = get(j, "half_width_s", cu.half_width_s);
  cu.workers = get(j, "workers", cu.workers);
  require(cu.clip_len_s > 0, "clip_len_s must be positive");
  require(cu.frames_per_clip >= 1, "frames_per_clip must be at least 1");
  require(cu.min_tail_s >= 0, "min_tail_s must be nonnegative");
  require(cu.half_width_s > 0, "half_width_s must be positive");
  require(cu.workers >= 1, "workers must be at least 1");
  if (j.contains("budget")) cu.budget = parse_budget(j.at("budget"));
  const auto mode = get<std::string>(j, "mode", "uniform");
  if (mode == "uniform") cu.mode = curation::PairingMode::uniform;
  else if (mode == "narration-centered") cu.mode = curation::PairingMode::narration_centered;
  else throw ConfigError("mode must be uniform or narration-centered");
  const auto scope = get<std::string>(j, "scope", "global");
  if (scope == "global") cu.scope = curation::RankScope::global;
  else if (scope == "per_video") cu.scope = curation::RankScope::per_video;
  else throw ConfigError("scope must be global or per_video");

  c.crop.margin_frac = get(j, "margin", c.crop.margin_frac);
  require(c.crop.margin_frac >= 0, "margin must be nonnegative");
  const auto hull = get<std::string>(j, "hull_mode", "per_clip");
  if (hull == "per_clip") c.crop.mode = spatial::HullMode::per_clip;
  else if (hull == "per_frame") c.crop.mode = spatial::HullMode::per_frame;
  else throw ConfigError("hull_mode must be per_clip or per_frame");

  c.align_threshold = get(j, "align_threshold", c.align_threshold);
  c.ppl_max = get(j, "ppl_max", c.ppl_max);
  require(c.ppl_max > 0, "ppl_max must be positive");
  const auto policy = narration::parse_merge_policy(get<std::string>(j, "merge_policy", "both"));
  require(policy.has_value(), "merge_policy must be both, prefer_rephrased or prefer_generated");
  c.merge_policy = *policy;
  c.seed = get(j, "seed", c.seed);

  const json service = get<json>(j, "service", json::object());
  require(service.is_object(), "'service' must be an object");
  reject_unknown(service, {"url", "stub_responses", "timeout_ms", "concurrency", "max_attempts"},
                 "service.");
  if (service.contains("url")) c.service.url = get<std::string>(service, "url", "");
  c.service.stub = get_path(service, "stub_responses", base);
  c.service.timeout = std::chrono::milliseconds(get<std::int64_t>(service, "timeout_ms", 30000));
  c.service.concurrency = get(service, "concurrency", c.service.concurrency);
  c.service.max_attempts = get(service, "max_attempts", c.service.max_attempts);
  require(c.service.timeout.count() > 0, "service.timeout_ms must be positive");
  require(c.service.concurrency >= 1, "service.concurrency must be at least 1");
  require(c.service.max_attempts >= 1, "service.max_attempts must be at least 1");
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  std::string text;
  try {
    text = core::read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  return parse_config(j, path.parent_path());
}

void check_inputs(const PipelineConfig& c) {
  auto must_exist = [](const fs::path& p, const char* what) {
    if (!fs::is_regular_file(p)) throw ConfigError(std::string(what) + " not found: " + p.string());
  };
  must_exist(c.detections, "detections");
  must_exist(c.narrations, "narrations");
  if (c.videos) must_exist(*c.videos, "videos");
  if (c.captions) must_exist(*c.captions, "captions");
  if (c.ego_narrations) must_exist(*c.ego_narrations, "ego_narrations");
  if (c.few_shot) must_exist(*c.few_shot, "few_shot");
  if (c.service.stub) must_exist(*c.service.stub, "service.stub_responses");
}

}  // namespace embed::pipeline
