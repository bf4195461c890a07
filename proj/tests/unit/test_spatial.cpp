// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>

#include "embed/core/errors.hpp"
#include "embed/spatial/spatial.hpp"
#include "support/generators.hpp"

using namespace embed;
using namespace embed::spatial;
using core::BoundingBox;
using core::FrameDetections;
using embed::testing::Rng;

namespace {

using Point = std::array<double, 2>;

double cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Monotone-chain hull over all box corners; the crop is the hull's extent.
BoundingBox hull_oracle(const std::vector<FrameDetections>& frames) {
  std::vector<Point> pts;
  auto corners = [&](const BoundingBox& b) {
    pts.push_back({b.x_min, b.y_min});
    pts.push_back({b.x_min, b.y_max});
    pts.push_back({b.x_max, b.y_min});
    pts.push_back({b.x_max, b.y_max});
  };
  for (const auto& f : frames) {
    for (const auto& h : f.hands) corners(h.box);
    for (const auto& o : f.objects) corners(o.box);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(pts.size() == 1 ? 1 : k - 1);
  BoundingBox out{hull[0][0], hull[0][1], hull[0][0], hull[0][1]};
  for (const auto& p : hull) {
    out.x_min = std::min(out.x_min, p[0]);
    out.y_min = std::min(out.y_min, p[1]);
    out.x_max = std::max(out.x_max, p[0]);
    out.y_max = std::max(out.y_max, p[1]);
  }
  return out;
}

bool contains(const BoundingBox& outer, const BoundingBox& inner) {
  return outer.x_min <= inner.x_min && outer.y_min <= inner.y_min && outer.x_max >= inner.x_max &&
         outer.y_max >= inner.y_max;
}

FrameDetections boxes(std::vector<BoundingBox> hands, std::vector<BoundingBox> objects) {
  FrameDetections f{"v", 0, 640, 360, {}, {}};
  for (auto& b : hands) f.hands.push_back({b, 0.9, core::HandSide::right, true});
  for (auto& b : objects) f.objects.push_back({b, 0.8});
  return f;
}

}  // namespace

TEST_CASE("hull of a hand and an object") {
  const std::vector<FrameDetections> fs = {boxes({{100, 50, 150, 120}}, {{130, 90, 260, 200}})};
  const auto h = hull_box(fs);
  REQUIRE(h);
  CHECK(*h == BoundingBox{100, 50, 260, 200});
  // Margin 0.1 of 160×150 adds 16 and 15.
  CHECK(expand_and_clamp(*h, 0.1, 640, 360) == BoundingBox{84, 35, 276, 215});
  CHECK(hull_box(std::vector<FrameDetections>{boxes({}, {})}) == std::nullopt);
}

TEST_CASE("expansion clamps to the frame") {
  CHECK(expand_and_clamp({0, 0, 640, 360}, 0.1, 640, 360) == BoundingBox{0, 0, 640, 360});
  CHECK(expand_and_clamp({600, 340, 640, 360}, 0.5, 640, 360) == BoundingBox{580, 330, 640, 360});
  CHECK(expand_and_clamp({10, 10, 20, 20}, 0.0, 640, 360) == BoundingBox{10, 10, 20, 20});
  CHECK_THROWS_AS(expand_and_clamp({10, 10, 20, 20}, -0.1, 640, 360), ConfigError);
}

TEST_CASE("hull matches a convex-hull oracle and contains every box after expansion") {
  Rng rng(17);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<FrameDetections> fs;
    for (int i = 0; i < embed::testing::uniform_int(rng, 1, 4); ++i)
      fs.push_back(embed::testing::random_frame(rng, "v", i));
    if (!embed::testing::coin(rng, 0.9)) fs[0].hands.push_back({embed::testing::random_box(rng, 640, 360), 0.5,
                                                                 core::HandSide::left, false});
    const auto h = hull_box(fs);
    bool any = false;
    for (const auto& f : fs) any = any || !f.hands.empty() || !f.objects.empty();
    REQUIRE(h.has_value() == any);
    if (!any) continue;
    CHECK(*h == hull_oracle(fs));
    const auto crop = expand_and_clamp(*h, 0.1, 640, 360);
    CHECK(contains(crop, *h));
    CHECK(contains({0, 0, 640, 360}, crop));
    for (const auto& f : fs) {
      for (const auto& d : f.hands) CHECK(contains(crop, d.box));
      for (const auto& d : f.objects) CHECK(contains(crop, d.box));
    }
  }
}

TEST_CASE("attach_crops per clip and per frame") {
  curation::CuratedClip c;
  c.scored.clip = {"v", 0, 5, {0.625, 1.875, 3.125, 4.375}};
  c.frames = {boxes({{100, 100, 200, 200}}, {}), std::nullopt, boxes({}, {{300, 50, 400, 150}}),
              boxes({}, {})};
  std::vector<curation::CuratedClip> clips = {c};
  attach_crops(clips, {0.0, HullMode::per_clip});
  CHECK(clips[0].frame_width == 640);
  CHECK(clips[0].crop_region == BoundingBox{100, 50, 400, 200});
  CHECK(clips[0].frame_crop_regions.empty());

  attach_crops(clips, {0.0, HullMode::per_frame});
  REQUIRE(clips[0].frame_crop_regions.size() == 4);
  CHECK(clips[0].frame_crop_regions[0] == BoundingBox{100, 100, 200, 200});
  CHECK_FALSE(clips[0].frame_crop_regions[1]);
  CHECK(clips[0].frame_crop_regions[2] == BoundingBox{300, 50, 400, 150});
  CHECK_FALSE(clips[0].frame_crop_regions[3]);

  c.frames = {std::nullopt, boxes({}, {})};
  clips = {c};
  attach_crops(clips);
  CHECK_FALSE(clips[0].crop_region);
}
