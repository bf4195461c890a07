// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/pipeline/stages.hpp"

#include <fstream>

#include "embed/assembly/assembly.hpp"
#include "embed/core/errors.hpp"
#include "embed/core/json.hpp"
#include "embed/core/jsonl.hpp"
#include "embed/core/numeric.hpp"
#include "embed/ingest/ingest.hpp"
#include "embed/narration/captions.hpp"
#include "embed/narration/filters.hpp"

namespace embed::pipeline {

using core::NarrationRecord;
using curation::CuratedClip;

namespace {

template <typename T, typename Decode>
std::vector<T> read_records(const fs::path& path, Decode decode) {
  core::JsonlReader reader(path);
  std::vector<T> out;
  std::string line;
  while (reader.next(line)) {
    try {
      out.push_back(decode(line));
    } catch (const DataError& e) {
      throw DataError(e.what(), reader.source(), reader.line_number());
    }
  }
  return out;
}

Report ingest_counts(const ingest::IngestReport& r) {
  return {{"lines", r.lines},
          {"indexed", r.indexed},
          {"skipped", r.skipped},
          {"duplicates", r.duplicates},
          {"rejected_samples", r.samples}};
}

std::string stem_of(const fs::path& p) { return p.filename().string(); }

}  // namespace

std::vector<NarrationRecord> read_narrations(const fs::path& path) {
  return read_records<NarrationRecord>(path, [](const std::string& l) {
    return core::from_json<NarrationRecord>(l);
  });
}

void write_narrations(const fs::path& path, std::span<const NarrationRecord> records) {
  std::string out;
  for (const auto& r : records) {
    out += core::to_json(r);
    out += '\n';
  }
  core::write_file_atomic(path, out);
}

std::vector<CuratedClip> read_curated(const fs::path& path) {
  return read_records<CuratedClip>(path, [](const std::string& l) { return curation::decode_curated(l); });
}

void write_curated(const fs::path& path, std::span<const CuratedClip> clips) {
  std::string out;
  for (const auto& c : clips) {
    out += curation::encode_curated(c);
    out += '\n';
  }
  core::write_file_atomic(path, out);
}

void write_report(const fs::path& path, const Report& report) {
  core::write_file_atomic(path, report.dump(2) + "\n");
}

Report ingest_stage(const IngestArgs& args) {
  auto det = ingest::ingest_detections(args.detections, args.strict);
  auto nar = ingest::ingest_narrations(args.narrations, args.strict);
  auto index = std::move(det.index);
  ingest::merge_into(index, std::move(nar.index));
  ingest::IngestReport total = det.report;
  total.merge(nar.report);
  Report videos_report = nullptr;
  if (args.videos) {
    auto vid = ingest::ingest_videos(*args.videos, args.strict);
    ingest::merge_into(index, std::move(vid.index));
    total.merge(vid.report);
    videos_report = ingest_counts(vid.report);
  }
  index.source_tag = stem_of(args.detections) + "+" + stem_of(args.narrations);
  ingest::save_index(index, args.out_dir, total, args.shards);
  return {{"detections", ingest_counts(det.report)},
          {"narrations", ingest_counts(nar.report)},
          {"videos_file", videos_report},
          {"videos", index.video_ids().size()},
          {"detection_records", index.detection_count()},
          {"narration_records", index.narration_count()}};
}

Report curate_stage(const CurateArgs& args) {
  const auto index = ingest::load_index(args.index_dir);
  auto result = curation::curate(index, args.options);
  write_curated(args.out, result.clips);
  const auto& r = result.report;
  return {{"videos", r.videos},
          {"candidate_clips", r.candidate_clips},
          {"selected_clips", r.selected_clips},
          {"paired_clips", r.paired_clips},
          {"unpaired_clips", r.unpaired_clips},
          {"paired_narrations", r.paired_narrations}};
}

Report crop_stage(const CropArgs& args) {
  auto clips = read_curated(args.scored);
  spatial::attach_crops(clips, args.options);
  std::size_t with_crop = 0;
  for (const auto& c : clips) with_crop += c.crop_region.has_value();
  write_curated(args.out, clips);
  return {{"clips", clips.size()},
          {"with_crop", with_crop},
          {"without_detections", clips.size() - with_crop}};
}

Report rephrase_stage(const RephraseArgs& args, narration::CompletionClient& client) {
  std::vector<NarrationRecord> input;
  for (const auto& c : read_curated(args.clips))
    input.insert(input.end(), c.narrations.begin(), c.narrations.end());

  const auto aligned = narration::filter_alignability(input, args.align_threshold);
  auto batch = narration::rephrase_all(aligned.kept, client, args.options);
  for (const auto& f : batch.failures)
    if (f.service)
      throw ServiceError("completion service failed for " + f.input.video_id + "@" +
                             core::shortest_repr(f.input.timestamp_s) + ": " + f.reason,
                         false);

  std::size_t unchanged = 0;
  for (const auto& r : batch.rephrased) unchanged += r.generation_meta.contains("unchanged");
  write_narrations(args.out, batch.rephrased);
  std::vector<std::string> rejected;
  for (const auto& f : batch.failures)
    rejected.push_back(f.input.video_id + "@" + core::shortest_repr(f.input.timestamp_s) + ": " + f.reason);
  return {{"input", input.size()},
          {"alignability_kept", aligned.kept.size()},
          {"alignability_dropped", aligned.dropped.size()},
          {"needs_scoring", aligned.needs_scoring.size()},
          {"rephrased", batch.rephrased.size()},
          {"unchanged", unchanged},
          {"rejected", rejected}};
}

Report captions_stage(const CaptionArgs& args) {
  auto ingested = narration::ingest_narrator_captions(args.captions, args.strict);
  auto filtered = narration::filter_perplexity(ingested.records, args.ppl_max);
  write_narrations(args.out, filtered.kept);
  return {{"ingest", ingest_counts(ingested.report)},
          {"perplexity_kept", filtered.kept.size()},
          {"perplexity_dropped", filtered.dropped.size()}};
}

Report merge_stage(const MergeArgs& args) {
  const auto clips = read_curated(args.clips);
  const auto rephrased = args.rephrased ? read_narrations(*args.rephrased) : std::vector<NarrationRecord>{};
  const auto generated = args.generated ? read_narrations(*args.generated) : std::vector<NarrationRecord>{};
  narration::ExoEgoReport r;
  auto entries = narration::build_exo_ego_entries(clips, rephrased, generated, args.policy, &r);
  std::vector<std::string> sources{"exo_ego:" + stem_of(args.clips)};
  if (args.rephrased) sources.push_back("exo_ego:" + stem_of(*args.rephrased));
  if (args.generated) sources.push_back("exo_ego:" + stem_of(*args.generated));
  const auto manifest = assembly::make_manifest(std::move(entries), std::move(sources));
  assembly::write_manifest(manifest, args.out);
  return {{"policy", narration::to_string(args.policy)},
          {"clips", r.clips},
          {"clips_with_pairs", r.clips_with_pairs},
          {"rephrased_pairs", r.rephrased_pairs},
          {"generated_pairs", r.generated_pairs},
          {"unmatched_captions", r.unmatched_captions},
          {"entries", manifest.entries.size()}};
}

Report assemble_stage(const AssembleArgs& args) {
  if (args.ego_manifest && args.ego_narrations)
    throw ConfigError("give either an ego manifest or raw ego narrations, not both");
  std::vector<core::DatasetManifest> parts;
  Report report = Report::object();
  if (args.ego_manifest) parts.push_back(assembly::read_manifest(*args.ego_manifest));
  if (args.ego_narrations) {
    const auto raw = read_narrations(*args.ego_narrations);
    const auto filtered = ingest::filter_ego_narrations(raw);
    parts.push_back(assembly::make_manifest(
        assembly::ego_entries(filtered.kept, 0.5, args.frames_per_clip),
        {"ego:" + stem_of(*args.ego_narrations)}));
    report["ego_filter"] = {{"input", filtered.report.input},
                            {"kept", filtered.report.kept},
                            {"dropped_unsure", filtered.report.dropped_unsure},
                            {"dropped_short", filtered.report.dropped_short}};
  }
  if (args.exo_manifest) parts.push_back(assembly::read_manifest(*args.exo_manifest));
  if (parts.empty()) throw ConfigError("assemble needs at least one input dataset");
  const auto combined = assembly::concat_datasets(parts);
  assembly::write_manifest(combined, args.out);
  report["entries"] = combined.entries.size();
  report["ego"] = {{"pair_count", combined.stats.ego.pair_count},
                   {"video_count", combined.stats.ego.video_count}};
  report["exo_ego"] = {{"pair_count", combined.stats.exo_ego.pair_count},
                       {"video_count", combined.stats.exo_ego.video_count}};
  return report;
}

Report sample_stage(const SampleArgs& args) {
  const auto manifest = assembly::read_manifest(args.manifest);
  assembly::BatchSampler sampler(manifest, {args.batch_size, args.seed, args.ego_fraction});
  std::string out;
  std::size_t cropped = 0, samples = 0;
  for (std::uint64_t step = 0; step < args.steps; ++step) {
    for (const auto& s : sampler.batch(step)) {
      out += assembly::encode_sample(s, step);
      out += '\n';
      cropped += s.view == assembly::View::cropped;
      ++samples;
    }
  }
  core::write_file_atomic(args.out, out);
  return {{"steps", args.steps},
          {"steps_per_epoch", sampler.steps_per_epoch()},
          {"samples", samples},
          {"cropped_views", cropped}};
}

}  // namespace embed::pipeline
