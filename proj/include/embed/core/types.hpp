// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace embed::core {

/// Axis-aligned box in continuous pixel coordinates, origin at the top-left
/// corner of the frame.
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }

  bool contains(const BoundingBox& other) const {
    return x_min <= other.x_min && y_min <= other.y_min &&
           x_max >= other.x_max && y_max >= other.y_max;
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

enum class HandSide { left, right, unknown };

struct HandDetection {
  BoundingBox box;
  double probability = 0.0;
  HandSide side = HandSide::unknown;
  bool in_contact = false;

  friend bool operator==(const HandDetection&, const HandDetection&) = default;
};

struct ObjectDetection {
  BoundingBox box;
  double probability = 0.0;

  friend bool operator==(const ObjectDetection&, const ObjectDetection&) = default;
};

/// Detector output for a single decoded frame. Frames are referenced by
/// (video_id, timestamp_s) and never loaded.
struct FrameDetections {
  std::string video_id;
  double timestamp_s = 0.0;
  int frame_width = 0;
  int frame_height = 0;
  std::vector<HandDetection> hands;
  std::vector<ObjectDetection> objects;

  bool empty() const { return hands.empty() && objects.empty(); }

  friend bool operator==(const FrameDetections&, const FrameDetections&) = default;
};

struct ClipRecord {
  std::string video_id;
  double start_s = 0.0;
  double end_s = 0.0;
  std::vector<double> frame_refs;

  double duration() const { return end_s - start_s; }
  bool covers(double t) const { return t >= start_s && t < end_s; }

  friend bool operator==(const ClipRecord&, const ClipRecord&) = default;
};

struct FrameTerm {
  int hoi_indicator = 0;
  double avg_hand_prob = 0.0;

  friend bool operator==(const FrameTerm&, const FrameTerm&) = default;
};

struct ScoredClip {
  ClipRecord clip;
  double hoi_score = 0.0;
  std::vector<FrameTerm> per_frame_terms;

  friend bool operator==(const ScoredClip&, const ScoredClip&) = default;
};

enum class NarrationSource { original_asr, rephrased, narrator_generated, ego_manual };

/// Scalar stored in a narration's generation metadata.
using MetaValue = std::variant<std::string, std::int64_t, double, bool>;
using GenerationMeta = std::map<std::string, MetaValue>;

struct NarrationRecord {
  std::string video_id;
  double timestamp_s = 0.0;
  std::string text;
  NarrationSource source = NarrationSource::original_asr;
  std::optional<double> alignability;
  std::optional<double> perplexity;
  GenerationMeta generation_meta;

  friend bool operator==(const NarrationRecord&, const NarrationRecord&) = default;
};

enum class Domain { ego, exo_ego };

struct ManifestEntry {
  ClipRecord clip;
  std::optional<BoundingBox> crop_region;
  NarrationRecord narration;
  Domain domain = Domain::exo_ego;
  // Frame size the crop region refers to; zero when unknown (no crop).
  int frame_width = 0;
  int frame_height = 0;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DomainStats {
  std::int64_t video_count = 0;
  std::int64_t pair_count = 0;

  friend bool operator==(const DomainStats&, const DomainStats&) = default;
};

struct ManifestStats {
  DomainStats ego;
  DomainStats exo_ego;

  const DomainStats& of(Domain d) const { return d == Domain::ego ? ego : exo_ego; }
  DomainStats& of(Domain d) { return d == Domain::ego ? ego : exo_ego; }

  friend bool operator==(const ManifestStats&, const ManifestStats&) = default;
};

inline constexpr const char* kSchemaVersion = "1.0";

struct DatasetManifest {
  std::string schema_version = kSchemaVersion;
  std::vector<std::string> created_from;
  std::vector<ManifestEntry> entries;
  ManifestStats stats;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

// String forms used on the wire.
const char* to_string(HandSide side);
const char* to_string(NarrationSource source);
const char* to_string(Domain domain);
std::optional<HandSide> parse_hand_side(std::string_view s);
std::optional<NarrationSource> parse_narration_source(std::string_view s);
std::optional<Domain> parse_domain(std::string_view s);

}  // namespace embed::core
