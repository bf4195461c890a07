// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "embed/core/types.hpp"
#include "embed/curation/curation.hpp"

namespace embed::spatial {

inline constexpr double kDefaultMargin = 0.1;

/// Bounding box of the convex hull of every hand and object box in the
/// frames. For axis-aligned boxes this is the component-wise min/max.
/// Empty when no boxes exist.
std::optional<core::BoundingBox> hull_box(std::span<const core::FrameDetections> frames);
std::optional<core::BoundingBox> hull_box(const core::FrameDetections& frame);

/// Grows the box by `margin_frac` of its width (height) on the left and right
/// (top and bottom), then clamps to [0, frame_w] × [0, frame_h].
core::BoundingBox expand_and_clamp(const core::BoundingBox& box, double margin_frac, int frame_w,
                                   int frame_h);

enum class HullMode {
  per_clip,   // one region across all sampled frames
  per_frame,  // also record one region per sampled frame
};

struct CropOptions {
  double margin_frac = kDefaultMargin;
  HullMode mode = HullMode::per_clip;
};

/// Sets crop_region (and frame_crop_regions in per-frame mode) on each clip.
/// Clips without any detection box get no crop_region.
void attach_crops(std::span<curation::CuratedClip> clips, const CropOptions& options = {});

}  // namespace embed::spatial
