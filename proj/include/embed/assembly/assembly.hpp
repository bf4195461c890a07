// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "embed/core/types.hpp"

namespace embed::assembly {

/// Sorts entries canonically and computes stats.
core::DatasetManifest make_manifest(std::vector<core::ManifestEntry> entries,
                                    std::vector<std::string> created_from);

/// Ego-side entries from manual narrations. A narration's clip comes from
/// generation_meta clip_start_s / clip_end_s when present, otherwise the
/// fallback window [max(0, t − half_window), t + half_window).
std::vector<core::ManifestEntry> ego_entries(std::span<const core::NarrationRecord> narrations,
                                             double fallback_half_window_s = 0.5,
                                             int frames_per_clip = 4);

/// Union of manifests with domain tags preserved and canonical order.
/// created_from becomes the sorted, de-duplicated union. Throws DataError
/// when a video_id appears under both domains.
core::DatasetManifest concat_datasets(const core::DatasetManifest& ego,
                                      const core::DatasetManifest& exo_ego);
core::DatasetManifest concat_datasets(std::span<const core::DatasetManifest> parts);

/// "<dir>/<stem>.meta.json" for "<dir>/<stem>.jsonl".
std::filesystem::path meta_path_for(const std::filesystem::path& manifest_path);

/// Writes the entries file and its header. Identical manifests always
/// produce identical bytes. Throws DataError if the manifest is invalid.
void write_manifest(const core::DatasetManifest& manifest, const std::filesystem::path& path);

/// Encoded forms, as written by write_manifest.
std::string encode_manifest_entries(const core::DatasetManifest& manifest);
std::string encode_manifest_meta(const core::DatasetManifest& manifest);

/// Reads and validates a manifest. A stats header that disagrees with the
/// entries is a DataError.
core::DatasetManifest read_manifest(const std::filesystem::path& path);

enum class View { original, cropped };
const char* to_string(View view);

struct TrainingSample {
  std::size_t manifest_entry_id = 0;  // index into manifest.entries
  View view = View::original;
  std::string narration;
  core::Domain domain = core::Domain::ego;

  friend bool operator==(const TrainingSample&, const TrainingSample&) = default;
};

/// Deterministic 64-bit mixing of a seed with stream coordinates.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Uniform integer in [0, bound) from a 64-bit engine, portable across
/// standard libraries (rejection sampling).
template <typename Engine>
std::uint64_t uniform_below(Engine& engine, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  for (;;) {
    const std::uint64_t x = engine();
    if (x < limit) return x % bound;
  }
}

/// Seeded permutation of 0..n-1 (Fisher–Yates on mt19937_64).
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

struct SamplerOptions {
  std::size_t batch_size = 1024;
  std::uint64_t seed = 0;
  // Share of each batch drawn from ego entries; off means the pooled
  // concatenation is sampled uniformly.
  std::optional<double> ego_fraction;
};

/// Batches over a read-only manifest. Each epoch walks a fresh permutation
/// derived from (seed, epoch) in batch_size steps, dropping the remainder,
/// so samples are without replacement within a step. The view of each draw
/// is an independent fair coin keyed on (seed, step, slot) for entries with
/// a crop region, and always original otherwise. Caches the current epoch's
/// permutation, so use one sampler per thread.
class BatchSampler {
 public:
  BatchSampler(const core::DatasetManifest& manifest, SamplerOptions options);

  std::size_t steps_per_epoch() const;
  std::vector<TrainingSample> batch(std::uint64_t step) const;

 private:
  TrainingSample make_sample(std::size_t entry, std::uint64_t step, std::size_t slot) const;

  const core::DatasetManifest& manifest_;
  SamplerOptions options_;
  std::vector<std::size_t> ego_ids_;
  std::vector<std::size_t> exo_ids_;
  mutable std::optional<std::uint64_t> cached_epoch_;
  mutable std::vector<std::size_t> cached_perm_;
};

/// One batch at step 0 of the given seed. Throws DataError when batch_size
/// exceeds the manifest size.
std::vector<TrainingSample> sample_batch(const core::DatasetManifest& manifest,
                                         std::size_t batch_size, std::uint64_t rng_seed);

std::string encode_sample(const TrainingSample& sample, std::uint64_t step);

}  // namespace embed::assembly
