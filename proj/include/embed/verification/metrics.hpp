// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace embed::verification {

/// Average precision of one ranked list; relevance > 0 counts as relevant.
/// Empty when the list holds no relevant item.
std::optional<double> average_precision(std::span<const double> ranked_relevance);

struct MapReport {
  double map = 0.0;
  std::size_t queries = 0;
  std::size_t excluded = 0;  // queries with no relevant item
};

/// Mean of average_precision over queries that have a relevant item.
MapReport mean_average_precision(std::span<const std::vector<double>> ranked_relevance);

/// DCG with gain_i / log2(i + 1) for 1-based rank i.
double dcg(std::span<const double> gains);

/// DCG of `ranked_gains` over the ideal DCG of the same length, where the
/// ideal ordering sorts `ideal_pool` (defaults to the ranked gains) in
/// descending order. 0 when the ideal DCG is 0. Throws on negative gains.
double ndcg(std::span<const double> ranked_gains, std::span<const double> ideal_pool = {});

enum class McqGroup { intra, inter };

struct McqQuestion {
  std::vector<double> similarities;  // exactly 5 candidates
  std::size_t answer = 0;
  McqGroup group = McqGroup::inter;
};

inline constexpr std::size_t kMcqCandidates = 5;

struct McqReport {
  std::size_t intra_total = 0;
  std::size_t intra_correct = 0;
  std::size_t inter_total = 0;
  std::size_t inter_correct = 0;

  std::optional<double> intra_accuracy() const;
  std::optional<double> inter_accuracy() const;
};

/// Prediction is the argmax similarity with ties going to the lowest index.
std::size_t mcq_prediction(std::span<const double> similarities);

/// Per-group accuracy. Throws DataError when a question does not have
/// exactly five candidates or its answer index is out of range.
McqReport mcq_accuracy(std::span<const McqQuestion> questions);

}  // namespace embed::verification
