// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "embed/core/matrix.hpp"

namespace embed::verification {

/// S[i][j] = <video_i, text_j>. Throws DataError on shape mismatch.
core::Matrix similarity_matrix(const core::EmbeddingBatch& batch);

/// Symmetric InfoNCE on a precomputed similarity matrix:
///   loss = −(1/B) Σ_i [log softmax_j(S/τ)[i][i] + log softmax_k(S/τ)[i][i]]
/// i.e. video-to-text plus text-to-video cross entropy with positives on
/// the diagonal. `grad_similarity` (optional) receives ∂loss/∂S.
double info_nce_from_similarity(const core::Matrix& similarity, double temperature,
                                core::Matrix* grad_similarity = nullptr);

/// Loss and gradients with respect to both embedding matrices. Softmaxes
/// are max-shifted and all reductions use pairwise summation. Throws
/// DataError on non-finite inputs or τ ≤ 0.
core::LossReport info_nce_loss(const core::EmbeddingBatch& batch);

}  // namespace embed::verification
