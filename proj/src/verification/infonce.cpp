// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/verification/infonce.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "embed/core/errors.hpp"
#include "embed/core/numeric.hpp"
#include "embed/core/validate.hpp"

namespace embed::verification {

using core::Matrix;

namespace {

double dot(std::span<const double> a, std::span<const double> b, std::vector<double>& scratch) {
  scratch.resize(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) scratch[k] = a[k] * b[k];
  return core::pairwise_sum(scratch);
}

/// log softmax at `target` and the full softmax of `logits`. The sum of the
/// non-max terms goes through log1p, which keeps near-one probabilities exact.
double log_softmax_at(std::span<const double> logits, std::size_t target, std::vector<double>& probs,
                      std::vector<double>& scratch) {
  const auto max_it = std::max_element(logits.begin(), logits.end());
  const double m = *max_it;
  const auto arg = static_cast<std::size_t>(max_it - logits.begin());
  probs.resize(logits.size());
  scratch.clear();
  for (std::size_t j = 0; j < logits.size(); ++j) {
    probs[j] = std::exp(logits[j] - m);
    if (j != arg) scratch.push_back(probs[j]);
  }
  const double rest = core::pairwise_sum(scratch);
  const double log_z = std::log1p(rest);  // log Σ exp(x − m); the max term is exactly 1
  const double z = 1.0 + rest;
  for (auto& p : probs) p /= z;
  return (logits[target] - m) - log_z;
}

}  // namespace

Matrix similarity_matrix(const core::EmbeddingBatch& batch) {
  const auto& v = batch.video_embeddings;
  const auto& t = batch.text_embeddings;
  if (v.rows() != t.rows() || v.cols() != t.cols())
    throw DataError("video and text embeddings differ in shape");
  Matrix s(v.rows(), t.rows());
  std::vector<double> scratch;
  for (std::size_t i = 0; i < v.rows(); ++i)
    for (std::size_t j = 0; j < t.rows(); ++j) s(i, j) = dot(v.row(i), t.row(j), scratch);
  return s;
}

double info_nce_from_similarity(const Matrix& s, double temperature, Matrix* grad) {
  if (!(std::isfinite(temperature) && temperature > 0)) throw DataError("temperature must be > 0");
  if (s.rows() != s.cols() || s.rows() == 0) throw DataError("similarity matrix must be square and nonempty");
  for (double x : s.values())
    if (!std::isfinite(x)) throw DataError("similarity matrix has non-finite entries");

  const std::size_t b = s.rows();
  const double inv_b = 1.0 / static_cast<double>(b);
  std::vector<double> logits(b), probs, scratch, terms;
  terms.reserve(2 * b);
  if (grad) *grad = Matrix(b, b);

  // Video-to-text: softmax over each row.
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < b; ++j) logits[j] = s(i, j) / temperature;
    terms.push_back(log_softmax_at(logits, i, probs, scratch));
    if (grad)
      for (std::size_t j = 0; j < b; ++j)
        (*grad)(i, j) += (probs[j] - (i == j ? 1.0 : 0.0)) * inv_b / temperature;
  }
  // Text-to-video: softmax over each column.
  for (std::size_t j = 0; j < b; ++j) {
    for (std::size_t k = 0; k < b; ++k) logits[k] = s(k, j) / temperature;
    terms.push_back(log_softmax_at(logits, j, probs, scratch));
    if (grad)
      for (std::size_t k = 0; k < b; ++k)
        (*grad)(k, j) += (probs[k] - (k == j ? 1.0 : 0.0)) * inv_b / temperature;
  }
  // 0.0 - x rather than -x so a zero loss is +0.
  return 0.0 - core::pairwise_sum(terms) * inv_b;
}

core::LossReport info_nce_loss(const core::EmbeddingBatch& batch) {
  if (auto check = core::validate(batch); !check.ok())
    throw DataError("invalid embedding batch: " + check.summary());
  const auto& v = batch.video_embeddings;
  const auto& t = batch.text_embeddings;
  const Matrix s = similarity_matrix(batch);

  core::LossReport report;
  Matrix g;
  report.loss = info_nce_from_similarity(s, batch.temperature, &g);

  // ∂L/∂V = G·T and ∂L/∂T = Gᵀ·V.
  const std::size_t b = v.rows(), d = v.cols();
  report.gradient_video = Matrix(b, d);
  report.gradient_text = Matrix(b, d);
  std::vector<double> scratch(b);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t c = 0; c < d; ++c) {
      for (std::size_t j = 0; j < b; ++j) scratch[j] = g(i, j) * t(j, c);
      report.gradient_video(i, c) = core::pairwise_sum(scratch);
      for (std::size_t k = 0; k < b; ++k) scratch[k] = g(k, i) * v(k, c);
      report.gradient_text(i, c) = core::pairwise_sum(scratch);
    }
  }
  return report;
}

}  // namespace embed::verification
