// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/core/validate.hpp"

#include <algorithm>
#include <cmath>

#include "embed/core/manifest.hpp"
#include "embed/core/types.hpp"

namespace embed::core {

namespace {

std::string indexed(const std::string& path, const char* field, std::size_t i) {
  return path + "." + field + "[" + std::to_string(i) + "]";
}

bool is_unit(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

void check_finite_matrix(ValidationResult& r, const Matrix& m, const std::string& path) {
  for (double v : m.values()) {
    if (!std::isfinite(v)) {
      r.add(path, "entries finite");
      return;
    }
  }
}

}  // namespace

bool ValidationResult::has_rule(const std::string& rule) const {
  return std::any_of(violations_.begin(), violations_.end(),
                     [&](const Violation& v) { return v.rule == rule; });
}

std::string ValidationResult::summary() const {
  std::string out;
  for (const auto& v : violations_) {
    if (!out.empty()) out += "; ";
    out += v.path + ": " + v.rule;
  }
  return out;
}

ValidationResult validate(const BoundingBox& box, const std::string& path) {
  ValidationResult r;
  if (!std::isfinite(box.x_min) || !std::isfinite(box.y_min) || !std::isfinite(box.x_max) ||
      !std::isfinite(box.y_max)) {
    r.add(path, "coordinates finite");
    return r;
  }
  if (box.x_min < 0 || box.y_min < 0 || box.x_max < 0 || box.y_max < 0)
    r.add(path, "coordinates ≥ 0");
  if (box.x_min > box.x_max) r.add(path, "x_min ≤ x_max");
  if (box.y_min > box.y_max) r.add(path, "y_min ≤ y_max");
  return r;
}

ValidationResult validate(const BoundingBox& box, int frame_width, int frame_height,
                          const std::string& path) {
  ValidationResult r = validate(box, path);
  if (r.ok() && (box.x_max > frame_width || box.y_max > frame_height))
    r.add(path, "box within frame");
  return r;
}

ValidationResult validate(const HandDetection& hand, const std::string& path) {
  ValidationResult r = validate(hand.box, path + ".box");
  if (!is_unit(hand.probability)) r.add(path + ".probability", "0 ≤ probability ≤ 1");
  return r;
}

ValidationResult validate(const ObjectDetection& object, const std::string& path) {
  ValidationResult r = validate(object.box, path + ".box");
  if (!is_unit(object.probability)) r.add(path + ".probability", "0 ≤ probability ≤ 1");
  return r;
}

ValidationResult validate(const FrameDetections& f) {
  ValidationResult r;
  const std::string path = "frame";
  if (f.video_id.empty()) r.add(path + ".video_id", "video_id nonempty");
  if (!std::isfinite(f.timestamp_s) || f.timestamp_s < 0)
    r.add(path + ".timestamp_s", "timestamp_s ≥ 0");
  const bool dims_ok = f.frame_width > 0 && f.frame_height > 0;
  if (!dims_ok) r.add(path, "frame dimensions > 0");
  auto check_box = [&](const BoundingBox& box, const std::string& p) {
    if (dims_ok) r.merge(validate(box, f.frame_width, f.frame_height, p));
    else r.merge(validate(box, p));
  };
  for (std::size_t i = 0; i < f.hands.size(); ++i) {
    const auto p = indexed(path, "hands", i);
    check_box(f.hands[i].box, p + ".box");
    if (!is_unit(f.hands[i].probability)) r.add(p + ".probability", "0 ≤ probability ≤ 1");
  }
  for (std::size_t i = 0; i < f.objects.size(); ++i) {
    const auto p = indexed(path, "objects", i);
    check_box(f.objects[i].box, p + ".box");
    if (!is_unit(f.objects[i].probability)) r.add(p + ".probability", "0 ≤ probability ≤ 1");
  }
  return r;
}

ValidationResult validate(const ClipRecord& c, const std::string& path) {
  ValidationResult r;
  if (c.video_id.empty()) r.add(path + ".video_id", "video_id nonempty");
  if (!std::isfinite(c.start_s) || !std::isfinite(c.end_s) || c.start_s < 0)
    r.add(path, "times finite and ≥ 0");
  if (!(c.start_s < c.end_s)) r.add(path, "start_s < end_s");
  if (c.frame_refs.empty()) r.add(path + ".frame_refs", "k ≥ 1");
  for (std::size_t i = 0; i < c.frame_refs.size(); ++i) {
    const double t = c.frame_refs[i];
    if (!(t >= c.start_s && t < c.end_s)) {
      r.add(indexed(path, "frame_refs", i), "frame_refs within [start_s, end_s)");
    }
    if (i > 0 && !(c.frame_refs[i - 1] < t)) {
      r.add(indexed(path, "frame_refs", i), "frame_refs strictly increasing");
    }
  }
  return r;
}

ValidationResult validate(const ScoredClip& s) {
  ValidationResult r = validate(s.clip, "scored.clip");
  bool terms_ok = !s.per_frame_terms.empty();
  if (!terms_ok) r.add("scored.per_frame_terms", "k ≥ 1");
  for (std::size_t i = 0; i < s.per_frame_terms.size(); ++i) {
    const auto& t = s.per_frame_terms[i];
    const auto p = indexed("scored", "per_frame_terms", i);
    if (t.hoi_indicator != 0 && t.hoi_indicator != 1) {
      r.add(p, "hoi_indicator ∈ {0,1}");
      terms_ok = false;
    }
    if (!is_unit(t.avg_hand_prob)) {
      r.add(p, "0 ≤ avg_hand_prob ≤ 1");
      terms_ok = false;
    }
  }
  if (!std::isfinite(s.hoi_score) || s.hoi_score < 0 || s.hoi_score > 2)
    r.add("scored.hoi_score", "0 ≤ hoi_score ≤ 2");
  else if (terms_ok && std::abs(mean_frame_terms(s.per_frame_terms) - s.hoi_score) > 1e-12)
    r.add("scored.hoi_score", "hoi_score equals mean of per_frame_terms");
  return r;
}

ValidationResult validate(const NarrationRecord& n, const std::string& path) {
  ValidationResult r;
  if (n.video_id.empty()) r.add(path + ".video_id", "video_id nonempty");
  if (!std::isfinite(n.timestamp_s) || n.timestamp_s < 0)
    r.add(path + ".timestamp_s", "timestamp_s ≥ 0");
  if (is_blank(n.text)) r.add(path + ".text", "text nonempty");

  const bool wants_align =
      n.source == NarrationSource::original_asr || n.source == NarrationSource::rephrased;
  if (wants_align != n.alignability.has_value())
    r.add(path + ".alignability", "alignability present iff source ∈ {original_asr, rephrased}");
  if (n.alignability && !is_unit(*n.alignability))
    r.add(path + ".alignability", "0 ≤ alignability ≤ 1");

  const bool wants_ppl = n.source == NarrationSource::narrator_generated;
  if (wants_ppl != n.perplexity.has_value())
    r.add(path + ".perplexity", "perplexity present iff source = narrator_generated");
  if (n.perplexity && !(std::isfinite(*n.perplexity) && *n.perplexity > 0))
    r.add(path + ".perplexity", "perplexity > 0");
  return r;
}

ValidationResult validate(const ManifestEntry& e, const std::string& path) {
  ValidationResult r = validate(e.clip, path + ".clip");
  r.merge(validate(e.narration, path + ".narration"));
  if (e.narration.video_id != e.clip.video_id)
    r.add(path + ".narration.video_id", "narration and clip share video_id");
  if (e.crop_region) {
    if (e.frame_width <= 0 || e.frame_height <= 0)
      r.add(path + ".frame_size", "frame dimensions > 0");
    else
      r.merge(validate(*e.crop_region, e.frame_width, e.frame_height, path + ".crop_region"));
  }
  const bool timed_source = e.narration.source == NarrationSource::original_asr ||
                            e.narration.source == NarrationSource::rephrased;
  if (e.domain == Domain::exo_ego && timed_source && !e.clip.covers(e.narration.timestamp_s))
    r.add(path + ".narration.timestamp_s", "narration timestamp within [start_s, end_s)");
  return r;
}

ValidationResult validate(const DatasetManifest& m) {
  ValidationResult r;
  if (m.schema_version.empty()) r.add("manifest.schema_version", "schema_version nonempty");
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    r.merge(validate(m.entries[i], "entries[" + std::to_string(i) + "]"));
    if (i > 0 && canonical_less(m.entries[i], m.entries[i - 1]))
      r.add("entries[" + std::to_string(i) + "]", "entries in canonical order");
  }
  if (compute_stats(m.entries) != m.stats) r.add("manifest.stats", "stats match entries");
  return r;
}

ValidationResult validate(const EmbeddingBatch& b) {
  ValidationResult r;
  if (b.video_embeddings.rows() != b.text_embeddings.rows() ||
      b.video_embeddings.cols() != b.text_embeddings.cols())
    r.add("batch", "video and text shapes match");
  check_finite_matrix(r, b.video_embeddings, "batch.video_embeddings");
  check_finite_matrix(r, b.text_embeddings, "batch.text_embeddings");
  if (!(std::isfinite(b.temperature) && b.temperature > 0))
    r.add("batch.temperature", "temperature > 0");
  return r;
}

ValidationResult validate(const LossReport& report) {
  ValidationResult r;
  if (!std::isfinite(report.loss)) r.add("report.loss", "loss finite");
  check_finite_matrix(r, report.gradient_video, "report.gradient_video");
  check_finite_matrix(r, report.gradient_text, "report.gradient_text");
  return r;
}

}  // namespace embed::core
