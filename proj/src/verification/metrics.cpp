// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/verification/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "embed/core/errors.hpp"
#include "embed/core/numeric.hpp"

namespace embed::verification {

std::optional<double> average_precision(std::span<const double> ranked) {
  std::vector<double> precisions;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (ranked[i] > 0) {
      ++hits;
      precisions.push_back(static_cast<double>(hits) / static_cast<double>(i + 1));
    }
  }
  if (hits == 0) return std::nullopt;
  return core::pairwise_sum(precisions) / static_cast<double>(hits);
}

MapReport mean_average_precision(std::span<const std::vector<double>> queries) {
  MapReport report;
  std::vector<double> aps;
  for (const auto& q : queries) {
    if (auto ap = average_precision(q)) aps.push_back(*ap);
    else ++report.excluded;
  }
  report.queries = aps.size();
  report.map = aps.empty() ? 0.0 : core::pairwise_sum(aps) / static_cast<double>(aps.size());
  return report;
}

double dcg(std::span<const double> gains) {
  std::vector<double> terms(gains.size());
  for (std::size_t i = 0; i < gains.size(); ++i)
    terms[i] = gains[i] / std::log2(static_cast<double>(i) + 2.0);
  return core::pairwise_sum(terms);
}

double ndcg(std::span<const double> ranked, std::span<const double> ideal_pool) {
  if (ideal_pool.empty()) ideal_pool = ranked;
  auto negative = [](double g) { return !(g >= 0); };
  if (std::any_of(ranked.begin(), ranked.end(), negative) ||
      std::any_of(ideal_pool.begin(), ideal_pool.end(), negative))
    throw DataError("nDCG gains must be nonnegative");
  std::vector<double> ideal(ideal_pool.begin(), ideal_pool.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  ideal.resize(std::min(ideal.size(), ranked.size()));
  const double idcg = dcg(ideal);
  if (idcg == 0.0) return 0.0;
  return dcg(ranked) / idcg;
}

std::optional<double> McqReport::intra_accuracy() const {
  if (intra_total == 0) return std::nullopt;
  return static_cast<double>(intra_correct) / static_cast<double>(intra_total);
}

std::optional<double> McqReport::inter_accuracy() const {
  if (inter_total == 0) return std::nullopt;
  return static_cast<double>(inter_correct) / static_cast<double>(inter_total);
}

std::size_t mcq_prediction(std::span<const double> sims) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < sims.size(); ++i)
    if (sims[i] > sims[best]) best = i;
  return best;
}

McqReport mcq_accuracy(std::span<const McqQuestion> questions) {
  McqReport r;
  for (std::size_t q = 0; q < questions.size(); ++q) {
    const auto& question = questions[q];
    if (question.similarities.size() != kMcqCandidates)
      throw DataError("question " + std::to_string(q) + " has " +
                      std::to_string(question.similarities.size()) + " candidates, expected 5");
    if (question.answer >= kMcqCandidates)
      throw DataError("question " + std::to_string(q) + " answer index out of range");
    const bool correct = mcq_prediction(question.similarities) == question.answer;
    if (question.group == McqGroup::intra) {
      ++r.intra_total;
      r.intra_correct += correct;
    } else {
      ++r.inter_total;
      r.inter_correct += correct;
    }
  }
  return r;
}

}  // namespace embed::verification
