// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace embed::narration {

struct FewShotPair {
  std::string exo_text;
  std::string ego_text;

  friend bool operator==(const FewShotPair&, const FewShotPair&) = default;
};

inline constexpr const char* kRephraseInstruction =
    "You are an assistant that extracts actions given the user inputs.";

/// Few-shot prompt for exo-to-ego rephrasing. Rendering is a pure function
/// of the three fields.
struct RephrasePrompt {
  std::string system_instruction;
  std::vector<FewShotPair> few_shot_pairs;
  std::string query;

  /// Layout:
  ///   ## Instruction
  ///   System: <instruction>
  ///   <blank>
  ///   ## Exo-to-Ego Rephrasing Examples 
  ///   ## User: Input; Assistant: Output.
  ///   User: <exo>            (repeated per pair,
  ///   Assistant: <ego>        pairs separated by
  ///   <blank>                 a blank line)
  ///   ## Rephrasing New User Input
  ///   User: <query>
  /// The examples heading keeps its trailing space.
  std::string render() const;
};

/// The three example pairs published with the rephrasing template.
std::vector<FewShotPair> reference_few_shot_pairs();

/// Ten pairs: the three reference pairs followed by seven in-house ones.
std::vector<FewShotPair> default_few_shot_pairs();

/// Reads pairs from JSON Lines: {"exo": "...", "ego": "..."}.
std::vector<FewShotPair> load_few_shot_pairs(const std::filesystem::path& path);

/// Throws DataError if exo_text is blank or no pairs are given.
RephrasePrompt build_rephrase_prompt(const std::string& exo_text,
                                     std::span<const FewShotPair> few_shot_pairs,
                                     const std::string& instruction = kRephraseInstruction);

}  // namespace embed::narration
