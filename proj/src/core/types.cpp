// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/core/types.hpp"

namespace embed::core {

const char* to_string(HandSide side) {
  switch (side) {
    case HandSide::left: return "left";
    case HandSide::right: return "right";
    case HandSide::unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(NarrationSource source) {
  switch (source) {
    case NarrationSource::original_asr: return "original_asr";
    case NarrationSource::rephrased: return "rephrased";
    case NarrationSource::narrator_generated: return "narrator_generated";
    case NarrationSource::ego_manual: return "ego_manual";
  }
  return "original_asr";
}

const char* to_string(Domain domain) {
  return domain == Domain::ego ? "ego" : "exo_ego";
}

std::optional<HandSide> parse_hand_side(std::string_view s) {
  if (s == "left") return HandSide::left;
  if (s == "right") return HandSide::right;
  if (s == "unknown") return HandSide::unknown;
  return std::nullopt;
}

std::optional<NarrationSource> parse_narration_source(std::string_view s) {
  if (s == "original_asr") return NarrationSource::original_asr;
  if (s == "rephrased") return NarrationSource::rephrased;
  if (s == "narrator_generated") return NarrationSource::narrator_generated;
  if (s == "ego_manual") return NarrationSource::ego_manual;
  return std::nullopt;
}

std::optional<Domain> parse_domain(std::string_view s) {
  if (s == "ego") return Domain::ego;
  if (s == "exo_ego") return Domain::exo_ego;
  return std::nullopt;
}

}  // namespace embed::core
