// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/core/json.hpp"

#include <cstdio>

#include "embed/core/errors.hpp"
#include "embed/core/numeric.hpp"

namespace embed::core {

using nlohmann::json;

// ---------------------------------------------------------------------------
// JsonWriter

void JsonWriter::separate() {
  if (need_comma_) out_ += ',';
  need_comma_ = true;
}

JsonWriter& JsonWriter::begin_object() {
  separate();
  out_ += '{';
  need_comma_ = false;
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separate();
  out_ += '[';
  need_comma_ = false;
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  need_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
  value(k);
  out_ += ':';
  need_comma_ = false;
  return *this;
}

JsonWriter& JsonWriter::value(std::string_view s) {
  separate();
  out_ += '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': out_ += "\\\""; break;
      case '\\': out_ += "\\\\"; break;
      case '\b': out_ += "\\b"; break;
      case '\f': out_ += "\\f"; break;
      case '\n': out_ += "\\n"; break;
      case '\r': out_ += "\\r"; break;
      case '\t': out_ += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out_ += buf;
        } else {
          out_ += static_cast<char>(c);
        }
    }
  }
  out_ += '"';
  return *this;
}

JsonWriter& JsonWriter::value(double d) {
  separate();
  out_ += shortest_repr(d);
  return *this;
}

JsonWriter& JsonWriter::value(std::int64_t i) {
  separate();
  out_ += std::to_string(i);
  return *this;
}

JsonWriter& JsonWriter::value(bool b) {
  separate();
  out_ += b ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::null() {
  separate();
  out_ += "null";
  return *this;
}

// ---------------------------------------------------------------------------
// Encoders

void write_json(JsonWriter& w, const BoundingBox& box) {
  w.begin_array().value(box.x_min).value(box.y_min).value(box.x_max).value(box.y_max).end_array();
}

void write_json(JsonWriter& w, const HandDetection& hand) {
  w.begin_object();
  w.key("box");
  write_json(w, hand.box);
  w.key("probability").value(hand.probability);
  w.key("side").value(to_string(hand.side));
  w.key("in_contact").value(hand.in_contact);
  w.end_object();
}

void write_json(JsonWriter& w, const ObjectDetection& object) {
  w.begin_object();
  w.key("box");
  write_json(w, object.box);
  w.key("probability").value(object.probability);
  w.end_object();
}

void write_json(JsonWriter& w, const FrameDetections& frame) {
  w.begin_object();
  w.key("video_id").value(frame.video_id);
  w.key("timestamp_s").value(frame.timestamp_s);
  w.key("frame_width").value(frame.frame_width);
  w.key("frame_height").value(frame.frame_height);
  w.key("hands").begin_array();
  for (const auto& h : frame.hands) write_json(w, h);
  w.end_array();
  w.key("objects").begin_array();
  for (const auto& o : frame.objects) write_json(w, o);
  w.end_array();
  w.end_object();
}

void write_json(JsonWriter& w, const ClipRecord& clip) {
  w.begin_object();
  w.key("video_id").value(clip.video_id);
  w.key("start_s").value(clip.start_s);
  w.key("end_s").value(clip.end_s);
  w.key("frame_refs").begin_array();
  for (double t : clip.frame_refs) w.value(t);
  w.end_array();
  w.end_object();
}

void write_json(JsonWriter& w, const ScoredClip& scored) {
  w.begin_object();
  w.key("clip");
  write_json(w, scored.clip);
  w.key("hoi_score").value(scored.hoi_score);
  w.key("per_frame_terms").begin_array();
  for (const auto& t : scored.per_frame_terms) {
    w.begin_array().value(t.hoi_indicator).value(t.avg_hand_prob).end_array();
  }
  w.end_array();
  w.end_object();
}

void write_json(JsonWriter& w, const GenerationMeta& meta) {
  w.begin_object();
  for (const auto& [k, v] : meta) {
    w.key(k);
    std::visit([&w](const auto& x) { w.value(x); }, v);
  }
  w.end_object();
}

void write_json(JsonWriter& w, const NarrationRecord& n) {
  w.begin_object();
  w.key("video_id").value(n.video_id);
  w.key("timestamp_s").value(n.timestamp_s);
  w.key("text").value(n.text);
  w.key("source").value(to_string(n.source));
  if (n.alignability) w.key("alignability").value(*n.alignability);
  if (n.perplexity) w.key("perplexity").value(*n.perplexity);
  if (!n.generation_meta.empty()) {
    w.key("generation_meta");
    write_json(w, n.generation_meta);
  }
  w.end_object();
}

void write_json(JsonWriter& w, const ManifestEntry& e) {
  w.begin_object();
  w.key("domain").value(to_string(e.domain));
  w.key("clip");
  write_json(w, e.clip);
  if (e.crop_region) {
    w.key("crop_region");
    write_json(w, *e.crop_region);
    w.key("frame_size").begin_array().value(e.frame_width).value(e.frame_height).end_array();
  }
  w.key("narration");
  write_json(w, e.narration);
  w.end_object();
}

void write_json(JsonWriter& w, const ManifestStats& stats) {
  w.begin_object();
  for (Domain d : {Domain::ego, Domain::exo_ego}) {
    w.key(to_string(d)).begin_object();
    w.key("pair_count").value(stats.of(d).pair_count);
    w.key("video_count").value(stats.of(d).video_count);
    w.end_object();
  }
  w.end_object();
}

// ---------------------------------------------------------------------------
// Decoders

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object()) throw DataError("expected JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw DataError(std::string("missing key \"") + key + "\"");
  return *it;
}

double as_double(const json& j, const char* what) {
  if (!j.is_number()) throw DataError(std::string("\"") + what + "\" must be a number");
  return j.get<double>();
}

std::int64_t as_int(const json& j, const char* what) {
  if (!j.is_number_integer())
    throw DataError(std::string("\"") + what + "\" must be an integer");
  return j.get<std::int64_t>();
}

std::string as_string(const json& j, const char* what) {
  if (!j.is_string()) throw DataError(std::string("\"") + what + "\" must be a string");
  return j.get<std::string>();
}

bool as_bool(const json& j, const char* what) {
  if (!j.is_boolean()) throw DataError(std::string("\"") + what + "\" must be a boolean");
  return j.get<bool>();
}

const json& as_array(const json& j, const char* what) {
  if (!j.is_array()) throw DataError(std::string("\"") + what + "\" must be an array");
  return j;
}

int as_dimension(const json& j, const char* what) {
  auto v = as_int(j, what);
  if (v < 0 || v > 1'000'000) throw DataError(std::string("\"") + what + "\" out of range");
  return static_cast<int>(v);
}

}  // namespace

BoundingBox parse_box(const json& j) {
  if (!j.is_array() || j.size() != 4)
    throw DataError("box must be an array [x_min, y_min, x_max, y_max]");
  return {as_double(j[0], "box"), as_double(j[1], "box"), as_double(j[2], "box"),
          as_double(j[3], "box")};
}

HandDetection parse_hand(const json& j) {
  HandDetection h;
  h.box = parse_box(require(j, "box"));
  h.probability = as_double(require(j, "probability"), "probability");
  auto side = parse_hand_side(as_string(require(j, "side"), "side"));
  if (!side) throw DataError("\"side\" must be one of left, right, unknown");
  h.side = *side;
  h.in_contact = as_bool(require(j, "in_contact"), "in_contact");
  return h;
}

ObjectDetection parse_object(const json& j) {
  ObjectDetection o;
  o.box = parse_box(require(j, "box"));
  o.probability = as_double(require(j, "probability"), "probability");
  return o;
}

FrameDetections parse_frame(const json& j) {
  FrameDetections f;
  f.video_id = as_string(require(j, "video_id"), "video_id");
  f.timestamp_s = as_double(require(j, "timestamp_s"), "timestamp_s");
  f.frame_width = as_dimension(require(j, "frame_width"), "frame_width");
  f.frame_height = as_dimension(require(j, "frame_height"), "frame_height");
  for (const auto& h : as_array(require(j, "hands"), "hands")) f.hands.push_back(parse_hand(h));
  for (const auto& o : as_array(require(j, "objects"), "objects"))
    f.objects.push_back(parse_object(o));
  return f;
}

ClipRecord parse_clip(const json& j) {
  ClipRecord c;
  c.video_id = as_string(require(j, "video_id"), "video_id");
  c.start_s = as_double(require(j, "start_s"), "start_s");
  c.end_s = as_double(require(j, "end_s"), "end_s");
  for (const auto& t : as_array(require(j, "frame_refs"), "frame_refs"))
    c.frame_refs.push_back(as_double(t, "frame_refs"));
  return c;
}

ScoredClip parse_scored_clip(const json& j) {
  ScoredClip s;
  s.clip = parse_clip(require(j, "clip"));
  s.hoi_score = as_double(require(j, "hoi_score"), "hoi_score");
  for (const auto& t : as_array(require(j, "per_frame_terms"), "per_frame_terms")) {
    if (!t.is_array() || t.size() != 2)
      throw DataError("per_frame_terms entries must be [hoi_indicator, avg_hand_prob]");
    s.per_frame_terms.push_back(
        {static_cast<int>(as_int(t[0], "hoi_indicator")), as_double(t[1], "avg_hand_prob")});
  }
  return s;
}

GenerationMeta parse_meta(const json& j) {
  if (!j.is_object()) throw DataError("\"generation_meta\" must be an object");
  GenerationMeta meta;
  for (const auto& [k, v] : j.items()) {
    if (v.is_string()) meta[k] = v.get<std::string>();
    else if (v.is_boolean()) meta[k] = v.get<bool>();
    else if (v.is_number_integer()) meta[k] = v.get<std::int64_t>();
    else if (v.is_number()) meta[k] = v.get<double>();
    else throw DataError("generation_meta values must be scalars");
  }
  return meta;
}

NarrationRecord parse_narration(const json& j) {
  NarrationRecord n;
  n.video_id = as_string(require(j, "video_id"), "video_id");
  n.timestamp_s = as_double(require(j, "timestamp_s"), "timestamp_s");
  n.text = as_string(require(j, "text"), "text");
  auto source = parse_narration_source(as_string(require(j, "source"), "source"));
  if (!source) throw DataError("unknown narration source");
  n.source = *source;
  if (auto it = j.find("alignability"); it != j.end() && !it->is_null())
    n.alignability = as_double(*it, "alignability");
  if (auto it = j.find("perplexity"); it != j.end() && !it->is_null())
    n.perplexity = as_double(*it, "perplexity");
  if (auto it = j.find("generation_meta"); it != j.end() && !it->is_null())
    n.generation_meta = parse_meta(*it);
  return n;
}

ManifestEntry parse_manifest_entry(const json& j) {
  ManifestEntry e;
  auto domain = parse_domain(as_string(require(j, "domain"), "domain"));
  if (!domain) throw DataError("\"domain\" must be ego or exo_ego");
  e.domain = *domain;
  e.clip = parse_clip(require(j, "clip"));
  if (auto it = j.find("crop_region"); it != j.end() && !it->is_null()) {
    e.crop_region = parse_box(*it);
    const json& size = require(j, "frame_size");
    if (!size.is_array() || size.size() != 2) throw DataError("\"frame_size\" must be [w, h]");
    e.frame_width = as_dimension(size[0], "frame_size");
    e.frame_height = as_dimension(size[1], "frame_size");
  }
  e.narration = parse_narration(require(j, "narration"));
  return e;
}

ManifestStats parse_stats(const json& j) {
  ManifestStats stats;
  for (Domain d : {Domain::ego, Domain::exo_ego}) {
    const json& s = require(j, to_string(d));
    stats.of(d).pair_count = as_int(require(s, "pair_count"), "pair_count");
    stats.of(d).video_count = as_int(require(s, "video_count"), "video_count");
  }
  return stats;
}

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
}

template <>
BoundingBox from_json<BoundingBox>(std::string_view text) {
  return parse_box(parse_json_text(text));
}
template <>
FrameDetections from_json<FrameDetections>(std::string_view text) {
  return parse_frame(parse_json_text(text));
}
template <>
ClipRecord from_json<ClipRecord>(std::string_view text) {
  return parse_clip(parse_json_text(text));
}
template <>
ScoredClip from_json<ScoredClip>(std::string_view text) {
  return parse_scored_clip(parse_json_text(text));
}
template <>
NarrationRecord from_json<NarrationRecord>(std::string_view text) {
  return parse_narration(parse_json_text(text));
}
template <>
ManifestEntry from_json<ManifestEntry>(std::string_view text) {
  return parse_manifest_entry(parse_json_text(text));
}
template <>
HandDetection from_json<HandDetection>(std::string_view text) {
  return parse_hand(parse_json_text(text));
}
template <>
ObjectDetection from_json<ObjectDetection>(std::string_view text) {
  return parse_object(parse_json_text(text));
}

}  // namespace embed::core
