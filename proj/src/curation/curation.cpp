// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/curation/curation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <thread>
#include <tuple>

#include "embed/core/errors.hpp"
#include "embed/core/json.hpp"
#include "embed/core/manifest.hpp"

namespace embed::curation {

using core::ClipRecord;
using core::FrameDetections;
using core::NarrationRecord;
using core::ScoredClip;

std::vector<ClipRecord> segment_video(const std::string& video_id, double video_duration_s,
                                      double clip_len_s, double min_tail_s) {
  if (!(video_duration_s > 0) || !std::isfinite(video_duration_s))
    throw DataError("video " + video_id + ": duration must be positive");
  if (!(clip_len_s > 0)) throw ConfigError("clip length must be positive");
  std::vector<ClipRecord> clips;
  for (std::size_t i = 0;; ++i) {
    const double start = static_cast<double>(i) * clip_len_s;
    if (start >= video_duration_s) break;
    const double end = std::min(static_cast<double>(i + 1) * clip_len_s, video_duration_s);
    if (end - start < clip_len_s && end - start < min_tail_s) break;
    clips.push_back({video_id, start, end, {}});
  }
  return clips;
}

namespace {

double slot_edge(const ClipRecord& clip, int k, int i) {
  return clip.start_s + clip.duration() * static_cast<double>(i) / static_cast<double>(k);
}

}  // namespace

std::vector<double> frame_targets(const ClipRecord& clip, int k) {
  if (k < 1) throw ConfigError("frames per clip must be ≥ 1");
  std::vector<double> targets(static_cast<std::size_t>(k));
  const double step = clip.duration() / static_cast<double>(k);
  for (int i = 0; i < k; ++i) targets[i] = clip.start_s + (i + 0.5) * step;
  return targets;
}

std::vector<FrameSlot> sample_frames(const ClipRecord& clip,
                                     std::span<const FrameDetections> video_frames, int k) {
  const auto targets = frame_targets(clip, k);
  std::vector<FrameSlot> slots(targets.size());
  auto by_time = [](const FrameDetections& f, double t) { return f.timestamp_s < t; };
  for (int i = 0; i < k; ++i) {
    auto& slot = slots[i];
    slot.target_s = targets[i];
    const double lo = slot_edge(clip, k, i);
    const double hi = i + 1 == k ? clip.end_s : slot_edge(clip, k, i + 1);
    auto it = std::lower_bound(video_frames.begin(), video_frames.end(), lo, by_time);
    const FrameDetections* best = nullptr;
    double best_dist = 0.0;
    for (; it != video_frames.end() && it->timestamp_s < hi; ++it) {
      const double dist = std::abs(it->timestamp_s - slot.target_s);
      if (!best || dist < best_dist) {
        best = &*it;
        best_dist = dist;
      }
    }
    if (best) slot.frame = *best;
  }
  return slots;
}

std::vector<double> slot_times(std::span<const FrameSlot> slots) {
  std::vector<double> times;
  times.reserve(slots.size());
  for (const auto& s : slots) times.push_back(s.time());
  return times;
}

int hoi_indicator(const FrameDetections& frame) {
  const bool contact = std::any_of(frame.hands.begin(), frame.hands.end(),
                                   [](const core::HandDetection& h) { return h.in_contact; });
  return contact && !frame.objects.empty() ? 1 : 0;
}

double avg_hand_prob(const FrameDetections& frame) {
  if (frame.hands.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& h : frame.hands) sum += h.probability;
  return sum / static_cast<double>(frame.hands.size());
}

ScoredClip hoi_score(const ClipRecord& clip, std::span<const FrameSlot> slots) {
  ScoredClip out;
  out.clip = clip;
  out.per_frame_terms.reserve(slots.size());
  for (const auto& slot : slots) {
    if (slot.frame) out.per_frame_terms.push_back({hoi_indicator(*slot.frame), avg_hand_prob(*slot.frame)});
    else out.per_frame_terms.push_back({0, 0.0});
  }
  out.hoi_score = core::mean_frame_terms(out.per_frame_terms);
  return out;
}

ScoredClip hoi_score(const ClipRecord& clip, std::span<const FrameDetections> frames) {
  ScoredClip out;
  out.clip = clip;
  out.per_frame_terms.reserve(frames.size());
  for (const auto& f : frames) out.per_frame_terms.push_back({hoi_indicator(f), avg_hand_prob(f)});
  out.hoi_score = core::mean_frame_terms(out.per_frame_terms);
  return out;
}

// ---------------------------------------------------------------------------
// Selection

Budget Budget::parse(const std::string& text) {
  const bool fractional = text.find_first_of(".eE") != std::string::npos;
  if (!fractional) {
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec != std::errc{} || ptr != text.data() + text.size() || n == 0)
      throw ConfigError("budget must be a positive count or a fraction in (0, 1]: " + text);
    return count(n);
  }
  double f = 0.0;
  try {
    std::size_t used = 0;
    f = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw ConfigError("malformed budget: " + text);
  }
  if (!(f > 0.0 && f <= 1.0)) throw ConfigError("budget fraction must lie in (0, 1]: " + text);
  return fraction(f);
}

std::size_t Budget::resolve(std::size_t available) const {
  if (const auto* n = std::get_if<std::size_t>(&value)) return std::min(*n, available);
  const double f = std::get<double>(value);
  const auto n = static_cast<std::size_t>(std::floor(f * static_cast<double>(available) + 1e-9));
  return std::min(n, available);
}

bool rank_before(const ScoredClip& a, const ScoredClip& b) {
  if (a.hoi_score != b.hoi_score) return a.hoi_score > b.hoi_score;
  return std::tie(a.clip.video_id, a.clip.start_s, a.clip.end_s) <
         std::tie(b.clip.video_id, b.clip.start_s, b.clip.end_s);
}

namespace {

std::vector<std::size_t> select_indices(std::span<const ScoredClip> scored, const Budget& budget,
                                        RankScope scope) {
  std::vector<std::size_t> order(scored.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto cmp = [&](std::size_t a, std::size_t b) { return rank_before(scored[a], scored[b]); };
  std::stable_sort(order.begin(), order.end(), cmp);
  if (scope == RankScope::global) {
    order.resize(budget.resolve(order.size()));
    return order;
  }
  std::map<std::string, std::vector<std::size_t>> per_video;
  for (auto i : order) per_video[scored[i].clip.video_id].push_back(i);
  std::vector<std::size_t> picked;
  for (auto& [_, ids] : per_video) {
    ids.resize(budget.resolve(ids.size()));
    picked.insert(picked.end(), ids.begin(), ids.end());
  }
  std::stable_sort(picked.begin(), picked.end(), cmp);
  return picked;
}

}  // namespace

std::vector<ScoredClip> select_top_clips(std::span<const ScoredClip> scored, const Budget& budget,
                                         RankScope scope) {
  std::vector<ScoredClip> out;
  for (auto i : select_indices(scored, budget, scope)) out.push_back(scored[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Pairing

std::vector<ClipPairing> pair_narrations(std::span<const ClipRecord> clips,
                                         std::span<const NarrationRecord> narrations) {
  std::vector<ClipPairing> out;
  out.reserve(clips.size());
  for (const auto& c : clips) out.push_back({c, {}});
  std::map<std::string, std::vector<std::size_t>> by_video;
  for (std::size_t i = 0; i < clips.size(); ++i) by_video[clips[i].video_id].push_back(i);
  for (auto& [_, ids] : by_video) {
    std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
      return clips[a].start_s < clips[b].start_s;
    });
  }
  for (const auto& n : narrations) {
    auto it = by_video.find(n.video_id);
    if (it == by_video.end()) continue;
    const auto& ids = it->second;
    // Last clip starting at or before t; disjoint intervals make it the only candidate.
    auto pos = std::upper_bound(ids.begin(), ids.end(), n.timestamp_s,
                                [&](double t, std::size_t i) { return t < clips[i].start_s; });
    if (pos == ids.begin()) continue;
    const auto idx = *std::prev(pos);
    if (clips[idx].covers(n.timestamp_s)) out[idx].narrations.push_back(n);
  }
  return out;
}

ClipRecord narration_centered_clip(const NarrationRecord& narration, double half_width) {
  if (!(narration.timestamp_s >= 0)) throw DataError("narration timestamp must be ≥ 0");
  return {narration.video_id, std::max(0.0, narration.timestamp_s - half_width),
          narration.timestamp_s + half_width, {}};
}

// ---------------------------------------------------------------------------
// Orchestration

namespace {

struct Candidate {
  ClipRecord clip;
  std::vector<NarrationRecord> narrations;  // narration-centred mode only
};

std::pair<int, int> frame_size_of(const ingest::CorpusIndex& index, const std::string& video_id) {
  if (auto it = index.videos.find(video_id);
      it != index.videos.end() && it->second.frame_width > 0 && it->second.frame_height > 0)
    return {it->second.frame_width, it->second.frame_height};
  if (auto it = index.detections_by_video.find(video_id);
      it != index.detections_by_video.end() && !it->second.empty())
    return {it->second.front().frame_width, it->second.front().frame_height};
  return {0, 0};
}

std::span<const FrameDetections> frames_of(const ingest::CorpusIndex& index,
                                           const std::string& video_id) {
  auto it = index.detections_by_video.find(video_id);
  if (it == index.detections_by_video.end()) return {};
  return it->second;
}

std::vector<Candidate> build_candidates(const ingest::CorpusIndex& index, const CurateOptions& opt) {
  std::vector<Candidate> out;
  if (opt.mode == PairingMode::uniform) {
    for (const auto& id : index.video_ids()) {
      const double duration = ingest::video_duration(index, id, opt.clip_len_s);
      if (duration <= 0) continue;
      for (auto& c : segment_video(id, duration, opt.clip_len_s, opt.min_tail_s))
        out.push_back({std::move(c), {}});
    }
    return out;
  }
  for (const auto& [id, narrations] : index.narrations_by_video) {
    // Narrations sharing a timestamp share one centred clip.
    std::map<std::pair<double, double>, std::size_t> slot;
    for (const auto& n : narrations) {
      auto clip = narration_centered_clip(n, opt.half_width_s);
      auto key = std::make_pair(clip.start_s, clip.end_s);
      auto [it, fresh] = slot.emplace(key, out.size());
      if (fresh) out.push_back({std::move(clip), {}});
      out[it->second].narrations.push_back(n);
    }
  }
  return out;
}

template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn fn) {
  const auto w = static_cast<std::size_t>(std::max(1, workers));
  if (w == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (n + w - 1) / w;
  for (std::size_t begin = 0; begin < n; begin += chunk) {
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([begin, end, &fn] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
}

}  // namespace

CurateResult curate(const ingest::CorpusIndex& index, const CurateOptions& opt) {
  if (opt.frames_per_clip < 1) throw ConfigError("frames per clip must be ≥ 1");
  auto candidates = build_candidates(index, opt);

  std::vector<ScoredClip> scored(candidates.size());
  std::vector<std::vector<FrameSlot>> slots(candidates.size());
  parallel_for(candidates.size(), opt.workers, [&](std::size_t i) {
    auto& clip = candidates[i].clip;
    slots[i] = sample_frames(clip, frames_of(index, clip.video_id), opt.frames_per_clip);
    clip.frame_refs = slot_times(slots[i]);
    scored[i] = hoi_score(clip, slots[i]);
  });

  CurateResult result;
  result.report.videos = index.video_ids().size();
  result.report.candidate_clips = candidates.size();
  const auto picked = select_indices(scored, opt.budget, opt.scope);

  std::vector<ClipRecord> picked_clips;
  for (auto i : picked) picked_clips.push_back(candidates[i].clip);

  std::vector<ClipPairing> pairings;
  if (opt.mode == PairingMode::uniform) {
    std::vector<NarrationRecord> all;
    for (const auto& [_, ns] : index.narrations_by_video) all.insert(all.end(), ns.begin(), ns.end());
    pairings = pair_narrations(picked_clips, all);
  } else {
    for (auto i : picked) pairings.push_back({candidates[i].clip, candidates[i].narrations});
  }

  for (std::size_t j = 0; j < picked.size(); ++j) {
    const auto i = picked[j];
    CuratedClip c;
    c.scored = scored[i];
    for (auto& s : slots[i]) c.frames.push_back(std::move(s.frame));
    c.narrations = std::move(pairings[j].narrations);
    std::tie(c.frame_width, c.frame_height) = frame_size_of(index, c.scored.clip.video_id);
    if (c.paired()) {
      ++result.report.paired_clips;
      result.report.paired_narrations += c.narrations.size();
    } else {
      ++result.report.unpaired_clips;
    }
    result.clips.push_back(std::move(c));
  }
  result.report.selected_clips = result.clips.size();
  return result;
}

// ---------------------------------------------------------------------------
// Codec

std::string encode_curated(const CuratedClip& c) {
  core::JsonWriter w;
  w.begin_object();
  w.key("scored");
  core::write_json(w, c.scored);
  w.key("frame_size").begin_array().value(c.frame_width).value(c.frame_height).end_array();
  w.key("frames").begin_array();
  for (const auto& f : c.frames) {
    if (f) core::write_json(w, *f);
    else w.null();
  }
  w.end_array();
  w.key("narrations").begin_array();
  for (const auto& n : c.narrations) core::write_json(w, n);
  w.end_array();
  if (c.crop_region) {
    w.key("crop_region");
    core::write_json(w, *c.crop_region);
  }
  if (!c.frame_crop_regions.empty()) {
    w.key("frame_crop_regions").begin_array();
    for (const auto& b : c.frame_crop_regions) {
      if (b) core::write_json(w, *b);
      else w.null();
    }
    w.end_array();
  }
  w.end_object();
  return w.take();
}

CuratedClip decode_curated(std::string_view line) {
  const auto j = core::parse_json_text(line);
  if (!j.is_object()) throw DataError("expected JSON object");
  CuratedClip c;
  try {
    c.scored = core::parse_scored_clip(j.at("scored"));
    const auto& size = j.at("frame_size");
    c.frame_width = size.at(0).get<int>();
    c.frame_height = size.at(1).get<int>();
    for (const auto& f : j.at("frames")) {
      if (f.is_null()) c.frames.emplace_back();
      else c.frames.emplace_back(core::parse_frame(f));
    }
    for (const auto& n : j.at("narrations")) c.narrations.push_back(core::parse_narration(n));
    if (auto it = j.find("crop_region"); it != j.end()) c.crop_region = core::parse_box(*it);
    if (auto it = j.find("frame_crop_regions"); it != j.end()) {
      for (const auto& b : *it) {
        if (b.is_null()) c.frame_crop_regions.emplace_back();
        else c.frame_crop_regions.emplace_back(core::parse_box(b));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad curated clip record: ") + e.what());
  }
  if (c.frames.size() != c.scored.per_frame_terms.size())
    throw DataError("frames and per_frame_terms differ in length");
  return c;
}

}  // namespace embed::curation
