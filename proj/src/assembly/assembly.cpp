// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/assembly/assembly.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "embed/core/errors.hpp"
#include "embed/core/json.hpp"
#include "embed/core/jsonl.hpp"
#include "embed/core/manifest.hpp"
#include "embed/core/validate.hpp"
#include "embed/curation/curation.hpp"

namespace embed::assembly {

namespace fs = std::filesystem;
using core::DatasetManifest;
using core::Domain;
using core::ManifestEntry;

core::DatasetManifest make_manifest(std::vector<ManifestEntry> entries,
                                    std::vector<std::string> created_from) {
  DatasetManifest m;
  core::canonical_sort(entries);
  m.entries = std::move(entries);
  m.stats = core::compute_stats(m.entries);
  std::sort(created_from.begin(), created_from.end());
  created_from.erase(std::unique(created_from.begin(), created_from.end()), created_from.end());
  m.created_from = std::move(created_from);
  return m;
}

std::vector<ManifestEntry> ego_entries(std::span<const core::NarrationRecord> narrations,
                                       double fallback_half_window_s, int frames_per_clip) {
  auto meta_number = [](const core::NarrationRecord& n, const char* key) -> std::optional<double> {
    auto it = n.generation_meta.find(key);
    if (it == n.generation_meta.end()) return std::nullopt;
    if (auto* d = std::get_if<double>(&it->second)) return *d;
    if (auto* i = std::get_if<std::int64_t>(&it->second)) return static_cast<double>(*i);
    return std::nullopt;
  };
  std::vector<ManifestEntry> out;
  out.reserve(narrations.size());
  for (const auto& n : narrations) {
    ManifestEntry e;
    e.domain = Domain::ego;
    e.narration = n;
    e.clip.video_id = n.video_id;
    auto start = meta_number(n, "clip_start_s");
    auto end = meta_number(n, "clip_end_s");
    if (start && end) {
      e.clip.start_s = *start;
      e.clip.end_s = *end;
    } else {
      e.clip.start_s = std::max(0.0, n.timestamp_s - fallback_half_window_s);
      e.clip.end_s = n.timestamp_s + fallback_half_window_s;
    }
    if (!(e.clip.start_s < e.clip.end_s))
      throw DataError("ego narration " + n.video_id + "@" + std::to_string(n.timestamp_s) +
                      " has an empty clip window");
    e.clip.frame_refs = curation::frame_targets(e.clip, frames_per_clip);
    out.push_back(std::move(e));
  }
  return out;
}

DatasetManifest concat_datasets(std::span<const DatasetManifest> parts) {
  std::map<std::string, Domain> owner;
  std::vector<ManifestEntry> entries;
  std::vector<std::string> created_from;
  for (const auto& part : parts) {
    for (const auto& e : part.entries) {
      auto [it, fresh] = owner.emplace(e.clip.video_id, e.domain);
      if (!fresh && it->second != e.domain)
        throw DataError("video_id " + e.clip.video_id +
                        " appears in both ego and exo_ego data; namespace the ids");
      entries.push_back(e);
    }
    created_from.insert(created_from.end(), part.created_from.begin(), part.created_from.end());
  }
  return make_manifest(std::move(entries), std::move(created_from));
}

DatasetManifest concat_datasets(const DatasetManifest& ego, const DatasetManifest& exo_ego) {
  const DatasetManifest parts[] = {ego, exo_ego};
  return concat_datasets(parts);
}

// ---------------------------------------------------------------------------
// Manifest files

fs::path meta_path_for(const fs::path& manifest_path) {
  fs::path p = manifest_path;
  if (p.extension() == ".jsonl") p.replace_extension();
  p += ".meta.json";
  return p;
}

std::string encode_manifest_entries(const DatasetManifest& m) {
  std::string out;
  for (const auto& e : m.entries) {
    out += core::to_json(e);
    out += '\n';
  }
  return out;
}

std::string encode_manifest_meta(const DatasetManifest& m) {
  core::JsonWriter w;
  w.begin_object();
  w.key("schema_version").value(m.schema_version);
  w.key("created_from").begin_array();
  for (const auto& s : m.created_from) w.value(s);
  w.end_array();
  w.key("entry_count").value(static_cast<std::int64_t>(m.entries.size()));
  w.key("stats");
  core::write_json(w, m.stats);
  w.end_object();
  return w.take() + "\n";
}

void write_manifest(const DatasetManifest& m, const fs::path& path) {
  if (auto check = core::validate(m); !check.ok())
    throw DataError("refusing to write invalid manifest: " + check.summary());
  core::write_file_atomic(path, encode_manifest_entries(m));
  core::write_file_atomic(meta_path_for(path), encode_manifest_meta(m));
}

DatasetManifest read_manifest(const fs::path& path) {
  const auto meta_file = meta_path_for(path);
  const auto meta = core::parse_json_text(core::read_file(meta_file));
  DatasetManifest m;
  try {
    m.schema_version = meta.at("schema_version").get<std::string>();
    m.created_from = meta.at("created_from").get<std::vector<std::string>>();
    m.stats = core::parse_stats(meta.at("stats"));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad manifest header: ") + e.what(), meta_file.string());
  }
  if (m.schema_version.substr(0, m.schema_version.find('.')) != "1")
    throw DataError("schema_version mismatch: " + m.schema_version, meta_file.string());

  core::JsonlReader reader(path);
  std::string line;
  while (reader.next(line)) {
    try {
      m.entries.push_back(core::from_json<ManifestEntry>(line));
    } catch (const DataError& e) {
      throw DataError(e.what(), reader.source(), reader.line_number());
    }
  }
  if (meta.value("entry_count", std::int64_t{-1}) != static_cast<std::int64_t>(m.entries.size()))
    throw DataError("entry_count in header does not match entries", meta_file.string());
  if (auto check = core::validate(m); !check.ok())
    throw DataError("manifest failed validation: " + check.summary(), path.string());
  return m;
}

// ---------------------------------------------------------------------------
// Sampling

const char* to_string(View view) { return view == View::cropped ? "cropped" : "original"; }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ a) ^ b);
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 engine(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(engine, i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

namespace {

// Stream tags keep the derived seeds of unrelated draws apart.
constexpr std::uint64_t kEpochStream = 0x65706f6368;   // "epoch"
constexpr std::uint64_t kViewStream = 0x76696577;      // "view"
constexpr std::uint64_t kEgoStream = 0x65676f;         // "ego"
constexpr std::uint64_t kExoStream = 0x65786f;         // "exo"

}  // namespace

BatchSampler::BatchSampler(const DatasetManifest& manifest, SamplerOptions options)
    : manifest_(manifest), options_(options) {
  if (options_.batch_size == 0) throw ConfigError("batch size must be positive");
  if (options_.batch_size > manifest_.entries.size())
    throw DataError("batch size " + std::to_string(options_.batch_size) +
                    " exceeds dataset size " + std::to_string(manifest_.entries.size()));
  for (std::size_t i = 0; i < manifest_.entries.size(); ++i)
    (manifest_.entries[i].domain == Domain::ego ? ego_ids_ : exo_ids_).push_back(i);
  if (options_.ego_fraction) {
    const double f = *options_.ego_fraction;
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("ego fraction must lie in [0, 1]");
    const auto n_ego = static_cast<std::size_t>(std::llround(f * static_cast<double>(options_.batch_size)));
    if (n_ego > ego_ids_.size() || options_.batch_size - n_ego > exo_ids_.size())
      throw DataError("domain pools too small for the requested ego fraction");
  }
}

std::size_t BatchSampler::steps_per_epoch() const {
  return manifest_.entries.size() / options_.batch_size;
}

TrainingSample BatchSampler::make_sample(std::size_t entry, std::uint64_t step,
                                         std::size_t slot) const {
  const auto& e = manifest_.entries[entry];
  TrainingSample s;
  s.manifest_entry_id = entry;
  s.narration = e.narration.text;
  s.domain = e.domain;
  if (e.crop_region) {
    const auto coin = derive_seed(options_.seed ^ kViewStream, step, slot);
    s.view = (coin >> 63) != 0 ? View::cropped : View::original;
  }
  return s;
}

std::vector<TrainingSample> BatchSampler::batch(std::uint64_t step) const {
  const auto b = options_.batch_size;
  std::vector<TrainingSample> out;
  out.reserve(b);
  if (!options_.ego_fraction) {
    const auto spe = steps_per_epoch();
    const std::uint64_t epoch = step / spe;
    const std::size_t pos = static_cast<std::size_t>(step % spe);
    if (cached_epoch_ != epoch) {
      cached_perm_ = seeded_permutation(manifest_.entries.size(),
                                        derive_seed(options_.seed, kEpochStream, epoch));
      cached_epoch_ = epoch;
    }
    for (std::size_t slot = 0; slot < b; ++slot)
      out.push_back(make_sample(cached_perm_[pos * b + slot], step, slot));
    return out;
  }
  const auto n_ego =
      static_cast<std::size_t>(std::llround(*options_.ego_fraction * static_cast<double>(b)));
  const auto ego_perm = seeded_permutation(ego_ids_.size(), derive_seed(options_.seed, kEgoStream, step));
  const auto exo_perm = seeded_permutation(exo_ids_.size(), derive_seed(options_.seed, kExoStream, step));
  for (std::size_t slot = 0; slot < b; ++slot) {
    const auto entry = slot < n_ego ? ego_ids_[ego_perm[slot]] : exo_ids_[exo_perm[slot - n_ego]];
    out.push_back(make_sample(entry, step, slot));
  }
  return out;
}

std::vector<TrainingSample> sample_batch(const DatasetManifest& manifest, std::size_t batch_size,
                                         std::uint64_t rng_seed) {
  return BatchSampler(manifest, {batch_size, rng_seed, std::nullopt}).batch(0);
}

std::string encode_sample(const TrainingSample& s, std::uint64_t step) {
  core::JsonWriter w;
  w.begin_object();
  w.key("step").value(static_cast<std::int64_t>(step));
  w.key("entry_id").value(static_cast<std::int64_t>(s.manifest_entry_id));
  w.key("view").value(to_string(s.view));
  w.key("domain").value(core::to_string(s.domain));
  w.key("narration").value(s.narration);
  w.end_object();
  return w.take();
}

}  // namespace embed::assembly
