// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include <rapidjson/document.h>
#include <rapidjson/error/en.h>

#include <cstring>

#include "embed/core/json.hpp"

namespace embed::core {

namespace {

using Value = rapidjson::Value;

constexpr unsigned kFlags = rapidjson::kParseFullPrecisionFlag | rapidjson::kParseValidateEncodingFlag;

bool key_is(const Value& name, const char* key) {
  return name.GetStringLength() == std::strlen(key) && std::memcmp(name.GetString(), key, name.GetStringLength()) == 0;
}

// Looks up the wanted keys in one pass; false on a duplicate of any of them.
template <std::size_t N>
bool members(const Value& obj, const char* const (&keys)[N], const Value* (&out)[N]) {
  for (auto& p : out) p = nullptr;
  for (auto it = obj.MemberBegin(); it != obj.MemberEnd(); ++it) {
    for (std::size_t k = 0; k < N; ++k) {
      if (!key_is(it->name, keys[k])) continue;
      if (out[k]) return false;
      out[k] = &it->value;
    }
  }
  for (auto* p : out)
    if (!p) return false;
  return true;
}

bool box(const Value& v, BoundingBox& b) {
  if (!v.IsArray() || v.Size() != 4) return false;
  for (rapidjson::SizeType i = 0; i < 4; ++i)
    if (!v[i].IsNumber()) return false;
  b = {v[0].GetDouble(), v[1].GetDouble(), v[2].GetDouble(), v[3].GetDouble()};
  return true;
}

bool dimension(const Value& v, int& out) {
  if (!v.IsInt64()) return false;
  const auto n = v.GetInt64();
  if (n < 0 || n > 1'000'000) return false;
  out = static_cast<int>(n);
  return true;
}

}  // namespace

std::optional<FrameDetections> parse_frame_fast(std::string_view line) {
  rapidjson::Document doc;
  doc.Parse<kFlags>(line.data(), line.size());
  if (doc.HasParseError() || !doc.IsObject()) return std::nullopt;

  static const char* const kFrameKeys[] = {"video_id", "timestamp_s", "frame_width", "frame_height", "hands",
                                           "objects"};
  const Value* m[6];
  if (!members(doc, kFrameKeys, m)) return std::nullopt;
  if (!m[0]->IsString() || !m[1]->IsNumber() || !m[4]->IsArray() || !m[5]->IsArray()) return std::nullopt;

  FrameDetections f;
  f.video_id.assign(m[0]->GetString(), m[0]->GetStringLength());
  f.timestamp_s = m[1]->GetDouble();
  if (!dimension(*m[2], f.frame_width) || !dimension(*m[3], f.frame_height)) return std::nullopt;

  static const char* const kHandKeys[] = {"box", "probability", "side", "in_contact"};
  f.hands.reserve(m[4]->Size());
  for (const auto& h : m[4]->GetArray()) {
    if (!h.IsObject()) return std::nullopt;
    const Value* hm[4];
    if (!members(h, kHandKeys, hm)) return std::nullopt;
    HandDetection d;
    if (!box(*hm[0], d.box) || !hm[1]->IsNumber() || !hm[2]->IsString() || !hm[3]->IsBool()) return std::nullopt;
    d.probability = hm[1]->GetDouble();
    auto side = parse_hand_side(std::string_view(hm[2]->GetString(), hm[2]->GetStringLength()));
    if (!side) return std::nullopt;
    d.side = *side;
    d.in_contact = hm[3]->GetBool();
    f.hands.push_back(d);
  }

  static const char* const kObjectKeys[] = {"box", "probability"};
  f.objects.reserve(m[5]->Size());
  for (const auto& o : m[5]->GetArray()) {
    if (!o.IsObject()) return std::nullopt;
    const Value* om[2];
    if (!members(o, kObjectKeys, om)) return std::nullopt;
    ObjectDetection d;
    if (!box(*om[0], d.box) || !om[1]->IsNumber()) return std::nullopt;
    d.probability = om[1]->GetDouble();
    f.objects.push_back(d);
  }
  return f;
}

}  // namespace embed::core
