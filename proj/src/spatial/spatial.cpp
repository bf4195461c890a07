// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/spatial/spatial.hpp"

#include <algorithm>

#include "embed/core/errors.hpp"

namespace embed::spatial {

using core::BoundingBox;
using core::FrameDetections;

namespace {

void extend(std::optional<BoundingBox>& hull, const BoundingBox& b) {
  if (!hull) {
    hull = b;
    return;
  }
  hull->x_min = std::min(hull->x_min, b.x_min);
  hull->y_min = std::min(hull->y_min, b.y_min);
  hull->x_max = std::max(hull->x_max, b.x_max);
  hull->y_max = std::max(hull->y_max, b.y_max);
}

}  // namespace

std::optional<BoundingBox> hull_box(const FrameDetections& frame) {
  std::optional<BoundingBox> hull;
  for (const auto& h : frame.hands) extend(hull, h.box);
  for (const auto& o : frame.objects) extend(hull, o.box);
  return hull;
}

std::optional<BoundingBox> hull_box(std::span<const FrameDetections> frames) {
  std::optional<BoundingBox> hull;
  for (const auto& f : frames) {
    if (auto h = hull_box(f)) extend(hull, *h);
  }
  return hull;
}

BoundingBox expand_and_clamp(const BoundingBox& box, double margin_frac, int frame_w, int frame_h) {
  if (!(margin_frac >= 0)) throw ConfigError("crop margin must be ≥ 0");
  const double dx = box.width() * margin_frac;
  const double dy = box.height() * margin_frac;
  const double w = frame_w;
  const double h = frame_h;
  return {std::clamp(box.x_min - dx, 0.0, w), std::clamp(box.y_min - dy, 0.0, h),
          std::clamp(box.x_max + dx, 0.0, w), std::clamp(box.y_max + dy, 0.0, h)};
}

void attach_crops(std::span<curation::CuratedClip> clips, const CropOptions& options) {
  for (auto& clip : clips) {
    std::vector<FrameDetections> present;
    for (const auto& f : clip.frames) {
      if (f) present.push_back(*f);
    }
    if (clip.frame_width <= 0 || clip.frame_height <= 0) {
      if (!present.empty()) {
        clip.frame_width = present.front().frame_width;
        clip.frame_height = present.front().frame_height;
      }
    }
    clip.crop_region.reset();
    clip.frame_crop_regions.clear();
    if (auto hull = hull_box(present)) {
      clip.crop_region =
          expand_and_clamp(*hull, options.margin_frac, clip.frame_width, clip.frame_height);
    }
    if (options.mode == HullMode::per_frame) {
      for (const auto& f : clip.frames) {
        std::optional<BoundingBox> region;
        if (f) {
          if (auto hull = hull_box(*f))
            region = expand_and_clamp(*hull, options.margin_frac, f->frame_width, f->frame_height);
        }
        clip.frame_crop_regions.push_back(region);
      }
    }
  }
}

}  // namespace embed::spatial
