// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

// Hand-rolled random generators shared by the property tests.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "embed/core/types.hpp"

namespace embed::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

/// Well-formed box inside a w×h frame.
inline core::BoundingBox random_box(Rng& rng, int w, int h) {
  double x0 = uniform(rng, 0, w), x1 = uniform(rng, 0, w);
  double y0 = uniform(rng, 0, h), y1 = uniform(rng, 0, h);
  if (x0 > x1) std::swap(x0, x1);
  if (y0 > y1) std::swap(y0, y1);
  return {x0, y0, x1, y1};
}

inline core::FrameDetections random_frame(Rng& rng, const std::string& video, double t, int w = 640,
                                          int h = 360, int max_hands = 3, int max_objects = 3) {
  core::FrameDetections f;
  f.video_id = video;
  f.timestamp_s = t;
  f.frame_width = w;
  f.frame_height = h;
  const int hands = uniform_int(rng, 0, max_hands);
  for (int i = 0; i < hands; ++i)
    f.hands.push_back({random_box(rng, w, h), uniform(rng, 0, 1),
                       i % 2 ? core::HandSide::right : core::HandSide::left, coin(rng)});
  const int objects = uniform_int(rng, 0, max_objects);
  for (int i = 0; i < objects; ++i) f.objects.push_back({random_box(rng, w, h), uniform(rng, 0, 1)});
  return f;
}

inline core::NarrationRecord random_narration(Rng& rng, const std::string& video, double t) {
  static const char* words[] = {"cut", "the", "onion", "with", "a", "knife", "#unsure", "pour",
                                "water", "into", "pot", "#Unsure", "open", "door", "C"};
  core::NarrationRecord n;
  n.video_id = video;
  n.timestamp_s = t;
  const int len = uniform_int(rng, 1, 7);
  for (int i = 0; i < len; ++i) {
    if (i) n.text += ' ';
    n.text += words[uniform_int(rng, 0, 14)];
  }
  n.source = core::NarrationSource::original_asr;
  n.alignability = uniform(rng, 0, 1);
  return n;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("embed-test-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace embed::testing
