// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/narration/captions.hpp"

#include <cmath>

#include "embed/core/errors.hpp"
#include "embed/core/json.hpp"
#include "embed/core/jsonl.hpp"
#include "embed/core/validate.hpp"

namespace embed::narration {

using core::NarrationRecord;
using nlohmann::json;

namespace {

NarrationRecord parse_caption(const json& j) {
  if (!j.is_object()) throw DataError("expected JSON object");
  auto get_number = [&](const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) throw DataError(std::string("missing key \"") + key + "\"");
    if (!it->is_number()) throw DataError(std::string("\"") + key + "\" must be a number");
    return it->get<double>();
  };
  NarrationRecord n;
  if (!j.contains("video_id") || !j["video_id"].is_string()) throw DataError("missing video_id");
  if (!j.contains("text") || !j["text"].is_string()) throw DataError("missing text");
  n.video_id = j["video_id"].get<std::string>();
  n.text = j["text"].get<std::string>();
  const double start = get_number("start_s");
  const double end = get_number("end_s");
  if (!(start >= 0 && start < end)) throw DataError("caption interval must satisfy 0 ≤ start_s < end_s");
  n.perplexity = get_number("perplexity");
  n.source = core::NarrationSource::narrator_generated;
  n.timestamp_s = start + (end - start) / 2;
  if (auto it = j.find("generation_meta"); it != j.end() && !it->is_null())
    n.generation_meta = core::parse_meta(*it);
  n.generation_meta["clip_start_s"] = start;
  n.generation_meta["clip_end_s"] = end;
  return n;
}

}  // namespace

CaptionIngest ingest_narrator_captions(const std::filesystem::path& path, bool strict) {
  CaptionIngest out;
  core::JsonlReader reader(path);
  std::string line;
  while (reader.next(line)) {
    ++out.report.lines;
    try {
      auto n = parse_caption(core::parse_json_text(line));
      if (auto check = core::validate(n); !check.ok())
        throw DataError("invariant violation: " + check.summary());
      out.records.push_back(std::move(n));
      ++out.report.indexed;
    } catch (const DataError& e) {
      if (strict) throw DataError(e.what(), reader.source(), reader.line_number());
      ++out.report.skipped;
      if (out.report.samples.size() < 20)
        out.report.samples.push_back(reader.source() + ":" + std::to_string(reader.line_number()) +
                                     ": " + e.what());
    }
  }
  return out;
}

std::optional<CaptionInterval> caption_interval(const NarrationRecord& record) {
  auto start = record.generation_meta.find("clip_start_s");
  auto end = record.generation_meta.find("clip_end_s");
  if (start == record.generation_meta.end() || end == record.generation_meta.end())
    return std::nullopt;
  auto as_double = [](const core::MetaValue& v) -> std::optional<double> {
    if (auto* d = std::get_if<double>(&v)) return *d;
    if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    return std::nullopt;
  };
  auto s = as_double(start->second);
  auto e = as_double(end->second);
  if (!s || !e) return std::nullopt;
  return CaptionInterval{*s, *e};
}

}  // namespace embed::narration
