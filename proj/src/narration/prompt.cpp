// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/narration/prompt.hpp"

#include <algorithm>

#include "embed/core/errors.hpp"
#include "embed/core/json.hpp"
#include "embed/core/jsonl.hpp"

namespace embed::narration {

std::string RephrasePrompt::render() const {
  std::string out;
  out += "## Instruction\n";
  out += "System: " + system_instruction + "\n";
  out += "\n";
  out += "## Exo-to-Ego Rephrasing Examples \n";
  out += "## User: Input; Assistant: Output.\n";
  for (const auto& pair : few_shot_pairs) {
    out += "User: " + pair.exo_text + "\n";
    out += "Assistant: " + pair.ego_text + "\n";
    out += "\n";
  }
  out += "## Rephrasing New User Input\n";
  out += "User: " + query + "\n";
  return out;
}

std::vector<FewShotPair> reference_few_shot_pairs() {
  return {
      {"and finally i'll route the rest of the hair here", "route the rest of the hair"},
      {"the clay is pressed into shape over the mold", "press the clay into shape over the mold"},
      {"let's start by turning on my stove", "turn on the stove"},
  };
}

std::vector<FewShotPair> default_few_shot_pairs() {
  auto pairs = reference_few_shot_pairs();
  const std::vector<FewShotPair> in_house = {
      {"now we're going to add a pinch of salt to the water", "add a pinch of salt to the water"},
      {"so i'm gonna take my knife and slice the onion", "slice the onion with the knife"},
      {"you want to whisk the eggs until they're nice and fluffy", "whisk the eggs"},
      {"next i'll screw the bracket onto the wall", "screw the bracket onto the wall"},
      {"and then we just fold the paper in half like this", "fold the paper in half"},
      {"i'm going to pour the batter into the pan", "pour the batter into the pan"},
      {"let me grab the sandpaper and smooth out the edges", "smooth the edges with the sandpaper"},
  };
  pairs.insert(pairs.end(), in_house.begin(), in_house.end());
  return pairs;
}

std::vector<FewShotPair> load_few_shot_pairs(const std::filesystem::path& path) {
  std::vector<FewShotPair> pairs;
  core::JsonlReader reader(path);
  std::string line;
  while (reader.next(line)) {
    const auto j = core::parse_json_text(line);
    if (!j.is_object() || !j.contains("exo") || !j.contains("ego") || !j["exo"].is_string() ||
        !j["ego"].is_string())
      throw DataError("few-shot pair must be {\"exo\": str, \"ego\": str}", reader.source(),
                      reader.line_number());
    pairs.push_back({j["exo"].get<std::string>(), j["ego"].get<std::string>()});
  }
  if (pairs.empty()) throw DataError("no few-shot pairs in " + path.string());
  return pairs;
}

RephrasePrompt build_rephrase_prompt(const std::string& exo_text,
                                     std::span<const FewShotPair> few_shot_pairs,
                                     const std::string& instruction) {
  const bool blank = std::all_of(exo_text.begin(), exo_text.end(),
                                 [](unsigned char c) { return std::isspace(c); });
  if (blank) throw DataError("rephrase input is empty");
  if (few_shot_pairs.empty()) throw DataError("rephrase prompt needs at least one few-shot pair");
  return {instruction, {few_shot_pairs.begin(), few_shot_pairs.end()}, exo_text};
}

}  // namespace embed::narration
