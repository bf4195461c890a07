// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "embed/core/types.hpp"

namespace embed::core {

/// Streaming writer for canonical single-line JSON: no whitespace, keys in
/// the order they are written, doubles in shortest round-trip form.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);

  JsonWriter& value(std::string_view s);
  JsonWriter& value(const char* s) { return value(std::string_view(s)); }
  JsonWriter& value(const std::string& s) { return value(std::string_view(s)); }
  JsonWriter& value(double d);
  JsonWriter& value(std::int64_t i);
  JsonWriter& value(int i) { return value(static_cast<std::int64_t>(i)); }
  JsonWriter& value(bool b);
  JsonWriter& null();

  const std::string& str() const { return out_; }
  std::string take() { return std::move(out_); }

 private:
  void separate();

  std::string out_;
  bool need_comma_ = false;
};

void write_json(JsonWriter& w, const BoundingBox& box);
void write_json(JsonWriter& w, const HandDetection& hand);
void write_json(JsonWriter& w, const ObjectDetection& object);
void write_json(JsonWriter& w, const FrameDetections& frame);
void write_json(JsonWriter& w, const ClipRecord& clip);
void write_json(JsonWriter& w, const ScoredClip& scored);
void write_json(JsonWriter& w, const GenerationMeta& meta);
void write_json(JsonWriter& w, const NarrationRecord& narration);
void write_json(JsonWriter& w, const ManifestEntry& entry);
void write_json(JsonWriter& w, const ManifestStats& stats);

/// Canonical one-line encoding of any core record (no trailing newline).
template <typename T>
std::string to_json(const T& record) {
  JsonWriter w;
  write_json(w, record);
  return w.take();
}

// Decoders. Schema problems (missing key, wrong type) raise DataError;
// invariants are not checked here, see validate().
BoundingBox parse_box(const nlohmann::json& j);
HandDetection parse_hand(const nlohmann::json& j);
ObjectDetection parse_object(const nlohmann::json& j);
FrameDetections parse_frame(const nlohmann::json& j);
ClipRecord parse_clip(const nlohmann::json& j);
ScoredClip parse_scored_clip(const nlohmann::json& j);
GenerationMeta parse_meta(const nlohmann::json& j);
NarrationRecord parse_narration(const nlohmann::json& j);
ManifestEntry parse_manifest_entry(const nlohmann::json& j);
ManifestStats parse_stats(const nlohmann::json& j);

/// Decodes one detection line without building a DOM. Returns nullopt for
/// anything parse_frame(parse_json_text(line)) would not accept as-is
/// (syntax errors, wrong types, duplicate keys); callers then take the
/// slow path for the exact error. Accepted lines decode identically.
std::optional<FrameDetections> parse_frame_fast(std::string_view line);

/// Parses one JSON text, raising DataError on syntax errors.
nlohmann::json parse_json_text(std::string_view text);

template <typename T>
T from_json(std::string_view text);

template <>
BoundingBox from_json<BoundingBox>(std::string_view text);
template <>
HandDetection from_json<HandDetection>(std::string_view text);
template <>
ObjectDetection from_json<ObjectDetection>(std::string_view text);
template <>
FrameDetections from_json<FrameDetections>(std::string_view text);
template <>
ClipRecord from_json<ClipRecord>(std::string_view text);
template <>
ScoredClip from_json<ScoredClip>(std::string_view text);
template <>
NarrationRecord from_json<NarrationRecord>(std::string_view text);
template <>
ManifestEntry from_json<ManifestEntry>(std::string_view text);

}  // namespace embed::core
