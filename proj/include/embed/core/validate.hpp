// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "embed/core/matrix.hpp"
#include "embed/core/types.hpp"

namespace embed::core {

struct Violation {
  std::string path;  // e.g. "hands[1].box"
  std::string rule;  // e.g. "x_min ≤ x_max"

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Outcome of checking a record's invariants. Violations are data, never
/// exceptions.
class ValidationResult {
 public:
  bool ok() const { return violations_.empty(); }
  explicit operator bool() const { return ok(); }

  const std::vector<Violation>& violations() const { return violations_; }
  void add(std::string path, std::string rule) {
    violations_.push_back({std::move(path), std::move(rule)});
  }
  void merge(const ValidationResult& other) {
    violations_.insert(violations_.end(), other.violations_.begin(), other.violations_.end());
  }
  bool has_rule(const std::string& rule) const;

  /// "path: rule; path: rule"
  std::string summary() const;

 private:
  std::vector<Violation> violations_;
};

ValidationResult validate(const BoundingBox& box, const std::string& path = "box");
/// Also checks that the box lies within a frame of the given size.
ValidationResult validate(const BoundingBox& box, int frame_width, int frame_height,
                          const std::string& path = "box");
ValidationResult validate(const HandDetection& hand, const std::string& path = "hand");
ValidationResult validate(const ObjectDetection& object, const std::string& path = "object");
ValidationResult validate(const FrameDetections& frame);
ValidationResult validate(const ClipRecord& clip, const std::string& path = "clip");
ValidationResult validate(const ScoredClip& scored);
ValidationResult validate(const NarrationRecord& narration,
                          const std::string& path = "narration");
ValidationResult validate(const ManifestEntry& entry, const std::string& path = "entry");
ValidationResult validate(const DatasetManifest& manifest);
ValidationResult validate(const EmbeddingBatch& batch);
ValidationResult validate(const LossReport& report);

}  // namespace embed::core
