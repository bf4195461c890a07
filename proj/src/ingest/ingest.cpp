// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/ingest/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string_view>
#include <tuple>
#include <type_traits>
#include <utility>

#include "embed/core/errors.hpp"
#include "embed/core/hash.hpp"
#include "embed/core/json.hpp"
#include "embed/core/jsonl.hpp"
#include "embed/core/validate.hpp"

namespace embed::ingest {

namespace fs = std::filesystem;
using core::FrameDetections;
using core::NarrationRecord;
using nlohmann::json;

namespace {

constexpr std::size_t kMaxSamples = 20;

bool schema_compatible(const std::string& version) {
  const std::string ours = core::kSchemaVersion;
  auto major = [](const std::string& v) { return v.substr(0, v.find('.')); };
  return major(version) == major(ours);
}

/// Detects and checks an optional header line. Returns true if `j` was a
/// header and should not be treated as a record.
bool consume_header(const json& j, const std::string& source, std::size_t line) {
  if (!j.is_object() || !j.contains("schema_version") || j.contains("video_id")) return false;
  const auto& v = j["schema_version"];
  if (!v.is_string() || !schema_compatible(v.get<std::string>()))
    throw DataError("schema_version mismatch: expected " + std::string(core::kSchemaVersion),
                    source, line);
  return true;
}

// Sorts by timestamp, breaking ties by canonical encoding.
template <typename Record>
void sort_records(std::vector<Record>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const Record& a, const Record& b) { return a.timestamp_s < b.timestamp_s; });
  auto first = records.begin();
  while (first != records.end()) {
    auto last = std::find_if(first, records.end(), [&](const Record& r) {
      return r.timestamp_s != first->timestamp_s;
    });
    if (last - first > 1) {
      std::sort(first, last,
                [](const Record& a, const Record& b) { return core::to_json(a) < core::to_json(b); });
    }
    first = last;
  }
}

// Same-timestamp duplicates may be separated by other same-timestamp
// records after sorting by encoding, so dedupe on a key set per video.
std::size_t dedupe_by_key(std::vector<NarrationRecord>& records) {
  std::set<std::tuple<double, std::string>> seen;
  std::vector<NarrationRecord> out;
  out.reserve(records.size());
  for (auto& r : records) {
    if (seen.emplace(r.timestamp_s, r.text).second) out.push_back(std::move(r));
  }
  const auto removed = records.size() - out.size();
  records = std::move(out);
  return removed;
}

void note(IngestReport& report, const std::string& message) {
  if (report.samples.size() < kMaxSamples) report.samples.push_back(message);
}

struct NoFastPath {};

// `fast` maps a line straight to an optional record; records it declines
// (and the first line, which may be a header) go through the DOM path.
template <typename Record, typename Parse, typename Insert, typename Fast = NoFastPath>
IngestReport read_records(const fs::path& path, bool strict, Parse parse, Insert insert, Fast fast = {}) {
  IngestReport report;
  core::JsonlReader reader(path);
  auto reject = [&](const DataError& e) {
    if (strict) throw DataError(e.what(), reader.source(), reader.line_number());
    ++report.skipped;
    note(report, reader.source() + ":" + std::to_string(reader.line_number()) + ": " + e.what());
  };
  std::string line;
  bool first = true;
  while (reader.next(line)) {
    if constexpr (!std::is_same_v<Fast, NoFastPath>) {
      if (!first) {
        if (auto record = fast(line)) {
          ++report.lines;
          if (auto check = core::validate(*record); check.ok()) {
            insert(std::move(*record));
            ++report.indexed;
          } else {
            reject(DataError("invariant violation: " + check.summary()));
          }
          continue;
        }
      }
    }
    json j;
    try {
      j = core::parse_json_text(line);
    } catch (const DataError& e) {
      ++report.lines;
      reject(e);
      continue;
    }
    if (std::exchange(first, false) && consume_header(j, reader.source(), reader.line_number()))
      continue;
    ++report.lines;
    try {
      Record record = parse(j);
      if (auto check = core::validate(record); !check.ok())
        throw DataError("invariant violation: " + check.summary());
      insert(std::move(record));
      ++report.indexed;
    } catch (const DataError& e) {
      reject(e);
    }
  }
  return report;
}

core::ValidationResult validate_video(const VideoInfo& v) {
  core::ValidationResult r;
  if (v.video_id.empty()) r.add("video.video_id", "video_id nonempty");
  if (!(std::isfinite(v.duration_s) && v.duration_s > 0))
    r.add("video.duration_s", "duration_s > 0");
  if (v.frame_width < 0 || v.frame_height < 0)
    r.add("video", "frame dimensions ≥ 0");
  return r;
}

}  // namespace

void IngestReport::merge(const IngestReport& other) {
  lines += other.lines;
  indexed += other.indexed;
  skipped += other.skipped;
  duplicates += other.duplicates;
  for (const auto& s : other.samples) {
    if (samples.size() < kMaxSamples) samples.push_back(s);
  }
}

std::size_t CorpusIndex::detection_count() const {
  std::size_t n = 0;
  for (const auto& [_, v] : detections_by_video) n += v.size();
  return n;
}

std::size_t CorpusIndex::narration_count() const {
  std::size_t n = 0;
  for (const auto& [_, v] : narrations_by_video) n += v.size();
  return n;
}

std::vector<std::string> CorpusIndex::video_ids() const {
  std::set<std::string> ids;
  for (const auto& [k, _] : detections_by_video) ids.insert(k);
  for (const auto& [k, _] : narrations_by_video) ids.insert(k);
  for (const auto& [k, _] : videos) ids.insert(k);
  return {ids.begin(), ids.end()};
}

IngestResult ingest_detections(const fs::path& path, bool strict) {
  IngestResult result;
  result.index.source_tag = path.filename().string();
  auto& by_video = result.index.detections_by_video;
  result.report = read_records<FrameDetections>(
      path, strict, [](const json& j) { return core::parse_frame(j); },
      [&](FrameDetections&& f) { by_video[f.video_id].push_back(std::move(f)); },
      [](std::string_view line) { return core::parse_frame_fast(line); });
  for (auto& [_, records] : by_video) sort_records(records);
  return result;
}

IngestResult ingest_narrations(const fs::path& path, bool strict) {
  IngestResult result;
  result.index.source_tag = path.filename().string();
  auto& by_video = result.index.narrations_by_video;
  result.report = read_records<NarrationRecord>(
      path, strict, [](const json& j) { return core::parse_narration(j); },
      [&](NarrationRecord&& n) { by_video[n.video_id].push_back(std::move(n)); });
  for (auto& [_, records] : by_video) {
    sort_records(records);
    const auto removed = dedupe_by_key(records);
    result.report.duplicates += removed;
    result.report.indexed -= removed;
  }
  return result;
}

IngestResult ingest_videos(const fs::path& path, bool strict) {
  IngestResult result;
  result.index.source_tag = path.filename().string();
  IngestReport report;
  core::JsonlReader reader(path);
  std::string line;
  while (reader.next(line)) {
    ++report.lines;
    try {
      json j = core::parse_json_text(line);
      VideoInfo v;
      if (!j.is_object()) throw DataError("expected JSON object");
      try {
        v.video_id = j.at("video_id").get<std::string>();
        v.duration_s = j.at("duration_s").get<double>();
        v.frame_width = j.value("frame_width", 0);
        v.frame_height = j.value("frame_height", 0);
      } catch (const json::exception& e) {
        throw DataError(std::string("bad video record: ") + e.what());
      }
      if (auto check = validate_video(v); !check.ok())
        throw DataError("invariant violation: " + check.summary());
      if (result.index.videos.contains(v.video_id))
        throw DataError("duplicate video_id " + v.video_id);
      result.index.videos.emplace(v.video_id, v);
      ++report.indexed;
    } catch (const DataError& e) {
      if (strict) throw DataError(e.what(), reader.source(), reader.line_number());
      ++report.skipped;
      note(report, reader.source() + ":" + std::to_string(reader.line_number()) + ": " + e.what());
    }
  }
  result.report = std::move(report);
  return result;
}

void merge_into(CorpusIndex& into, CorpusIndex&& fragment) {
  for (auto& [id, records] : fragment.detections_by_video) {
    auto& dst = into.detections_by_video[id];
    dst.insert(dst.end(), std::make_move_iterator(records.begin()),
               std::make_move_iterator(records.end()));
    sort_records(dst);
  }
  for (auto& [id, records] : fragment.narrations_by_video) {
    auto& dst = into.narrations_by_video[id];
    dst.insert(dst.end(), std::make_move_iterator(records.begin()),
               std::make_move_iterator(records.end()));
    sort_records(dst);
    dedupe_by_key(dst);
  }
  for (auto& [id, info] : fragment.videos) into.videos[id] = std::move(info);
  if (into.source_tag.empty()) into.source_tag = std::move(fragment.source_tag);
  else if (!fragment.source_tag.empty()) into.source_tag += "+" + fragment.source_tag;
}

double video_duration(const CorpusIndex& index, const std::string& video_id, double clip_len_s) {
  if (auto it = index.videos.find(video_id); it != index.videos.end()) return it->second.duration_s;
  double latest = -1.0;
  if (auto it = index.detections_by_video.find(video_id); it != index.detections_by_video.end() &&
                                                          !it->second.empty())
    latest = std::max(latest, it->second.back().timestamp_s);
  if (auto it = index.narrations_by_video.find(video_id); it != index.narrations_by_video.end() &&
                                                          !it->second.empty())
    latest = std::max(latest, it->second.back().timestamp_s);
  if (latest < 0) return 0.0;
  return (std::floor(latest / clip_len_s) + 1.0) * clip_len_s;
}

std::size_t token_count(std::string_view text) {
  std::size_t count = 0;
  bool in_token = false;
  for (unsigned char c : text) {
    const bool space = std::isspace(c) != 0;
    if (!space && !in_token) ++count;
    in_token = !space;
  }
  return count;
}

EgoFilterResult filter_ego_narrations(std::span<const NarrationRecord> narrations) {
  EgoFilterResult out;
  out.report.input = narrations.size();
  for (const auto& n : narrations) {
    if (n.text.find("#unsure") != std::string::npos || n.text.find("#Unsure") != std::string::npos) {
      ++out.report.dropped_unsure;
      out.dropped.push_back(n);
    } else if (token_count(n.text) < kMinEgoTokens) {
      ++out.report.dropped_short;
      out.dropped.push_back(n);
    } else {
      out.kept.push_back(n);
    }
  }
  out.report.kept = out.kept.size();
  return out;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

std::string shard_name(const char* kind, int shard, int count) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s-%05d-of-%05d.jsonl", kind, shard, count);
  return buf;
}

int shard_of(const std::string& video_id, int count) {
  return static_cast<int>(core::fnv1a64(video_id) % static_cast<std::uint64_t>(count));
}

std::string encode_video(const VideoInfo& v) {
  core::JsonWriter w;
  w.begin_object();
  w.key("video_id").value(v.video_id);
  w.key("duration_s").value(v.duration_s);
  w.key("frame_width").value(v.frame_width);
  w.key("frame_height").value(v.frame_height);
  w.end_object();
  return w.take();
}

}  // namespace

void save_index(const CorpusIndex& index, const fs::path& dir, const IngestReport& report,
                int shard_count) {
  if (shard_count < 1) throw ConfigError("shard count must be ≥ 1");
  std::vector<std::vector<std::string>> det(shard_count), nar(shard_count);
  for (const auto& [id, records] : index.detections_by_video) {
    auto& shard = det[shard_of(id, shard_count)];
    for (const auto& r : records) shard.push_back(core::to_json(r));
  }
  for (const auto& [id, records] : index.narrations_by_video) {
    auto& shard = nar[shard_of(id, shard_count)];
    for (const auto& r : records) shard.push_back(core::to_json(r));
  }
  for (int s = 0; s < shard_count; ++s) {
    core::write_file_atomic(dir / shard_name("detections", s, shard_count), core::join_lines(det[s]));
    core::write_file_atomic(dir / shard_name("narrations", s, shard_count), core::join_lines(nar[s]));
  }
  std::vector<std::string> videos;
  for (const auto& [_, v] : index.videos) videos.push_back(encode_video(v));
  core::write_file_atomic(dir / "videos.jsonl", core::join_lines(videos));

  core::JsonWriter w;
  w.begin_object();
  w.key("schema_version").value(core::kSchemaVersion);
  w.key("source_tag").value(index.source_tag);
  w.key("shard_count").value(shard_count);
  w.key("detection_count").value(static_cast<std::int64_t>(index.detection_count()));
  w.key("narration_count").value(static_cast<std::int64_t>(index.narration_count()));
  w.key("video_count").value(static_cast<std::int64_t>(index.video_ids().size()));
  w.key("skipped").value(static_cast<std::int64_t>(report.skipped));
  w.key("duplicates").value(static_cast<std::int64_t>(report.duplicates));
  w.end_object();
  core::write_file_atomic(dir / "index.meta.json", w.str() + "\n");
}

CorpusIndex load_index(const fs::path& dir) {
  const auto meta_path = dir / "index.meta.json";
  if (!fs::exists(meta_path)) throw IoError("not an index directory (missing " + meta_path.string() + ")");
  json meta = core::parse_json_text(core::read_file(meta_path));
  if (!meta.is_object() || !meta.contains("schema_version") ||
      !schema_compatible(meta["schema_version"].get<std::string>()))
    throw DataError("schema_version mismatch", meta_path.string());
  const int shards = meta.value("shard_count", 0);
  if (shards < 1) throw DataError("bad shard_count", meta_path.string());

  CorpusIndex index;
  for (int s = 0; s < shards; ++s) {
    merge_into(index, std::move(ingest_detections(dir / shard_name("detections", s, shards), true).index));
    merge_into(index, std::move(ingest_narrations(dir / shard_name("narrations", s, shards), true).index));
  }
  merge_into(index, std::move(ingest_videos(dir / "videos.jsonl", true).index));
  index.source_tag = meta.value("source_tag", std::string{});

  if (static_cast<std::size_t>(meta.value("detection_count", -1)) != index.detection_count() ||
      static_cast<std::size_t>(meta.value("narration_count", -1)) != index.narration_count())
    throw DataError("index record counts do not match index.meta.json", meta_path.string());
  return index;
}

}  // namespace embed::ingest
