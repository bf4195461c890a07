// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/pipeline/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <map>
#include <vector>

#include "embed/core/errors.hpp"
#include "embed/core/hash.hpp"
#include "embed/core/jsonl.hpp"
#include "embed/narration/prompt.hpp"
#include "embed/pipeline/stages.hpp"

namespace embed::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const ConfigError&) {
    return kExitConfig;
  } catch (const IoError&) {
    return kExitIo;
  } catch (const DataError&) {
    return kExitData;
  } catch (const ServiceError&) {
    return kExitService;
  } catch (const fs::filesystem_error&) {
    return kExitIo;
  } catch (...) {
    return kExitData;
  }
}

std::string file_digest(const fs::path& path) { return core::sha256_hex(core::read_file(path)); }

std::string dir_digest(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  core::Sha256 h;
  for (const auto& f : files) {
    h.update(f.filename().string());
    h.update(std::string(1, '\0'));
    h.update(file_digest(f));
  }
  return h.hex_digest();
}

std::unique_ptr<narration::CompletionClient> make_client(const ServiceConfig& service) {
  if (service.stub)
    return std::make_unique<narration::StubCompletionClient>(
        narration::StubCompletionClient::from_file(service.stub->string()));
  std::string url;
  if (service.url) url = *service.url;
  else if (const char* env = std::getenv("EMBED_LLM_URL")) url = env;
  if (url.empty())
    throw ConfigError("no completion service: set service.url, service.stub_responses or EMBED_LLM_URL");
  const char* token = std::getenv("EMBED_LLM_TOKEN");
  return std::make_unique<narration::HttpCompletionClient>(url, token ? token : "", service.timeout);
}

namespace {

[[noreturn]] void rethrow_in_stage(const std::string& stage) {
  const std::string prefix = "stage " + stage + ": ";
  try {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const IoError& e) {
    throw IoError(prefix + e.what());
  } catch (const DataError& e) {
    throw DataError(prefix + e.what());
  } catch (const ServiceError& e) {
    throw ServiceError(prefix + e.what(), e.transient());
  } catch (const fs::filesystem_error& e) {
    throw IoError(prefix + e.what());
  }
}

struct Stage {
  std::string name;
  json params;                          // config subset
  std::map<std::string, fs::path> inputs;
  std::vector<std::string> outputs;     // relative to the output dir
  std::function<json()> run;
};

std::string digest_of(const fs::path& p) {
  return fs::is_directory(p) ? dir_digest(p) : file_digest(p);
}

std::string stage_key(const Stage& s) {
  json k = {{"stage", s.name}, {"params", s.params}, {"inputs", json::object()}};
  for (const auto& [name, path] : s.inputs) k["inputs"][name] = digest_of(path);
  return core::sha256_hex(k.dump());
}

json output_digests(const fs::path& root, const std::vector<std::string>& outputs) {
  json out = json::object();
  for (const auto& o : outputs) {
    const auto p = root / o;
    if (!fs::exists(p)) return nullptr;
    out[o] = digest_of(p);
  }
  return out;
}

std::string few_shot_identity(const PipelineConfig& c) {
  if (c.few_shot) return file_digest(*c.few_shot);
  std::string all;
  for (const auto& p : narration::default_few_shot_pairs()) all += p.exo_text + '\n' + p.ego_text + '\n';
  return core::sha256_hex(all);
}

std::string service_identity(const PipelineConfig& c, const RunOptions& o) {
  if (o.client) return "injected";
  if (c.service.stub) return "stub:" + file_digest(*c.service.stub);
  if (c.service.url) return "url:" + *c.service.url;
  const char* env = std::getenv("EMBED_LLM_URL");
  return std::string("url:") + (env ? env : "");
}

}  // namespace

json run_pipeline(const PipelineConfig& config, const RunOptions& options, Logger& log) {
  check_inputs(config);
  std::unique_ptr<narration::CompletionClient> owned;
  narration::CompletionClient* client = options.client;
  if (!client) {
    owned = make_client(config.service);
    client = owned.get();
  }

  const fs::path out = config.output_dir;
  const fs::path stamps = out / ".stamps";
  const fs::path reports = out / "reports";
  auto curate_opts = config.curate;
  if (options.workers) curate_opts.workers = *options.workers;

  narration::RephraseOptions rephrase_opts;
  if (config.few_shot) rephrase_opts.few_shot_pairs = narration::load_few_shot_pairs(*config.few_shot);
  rephrase_opts.concurrency = config.service.concurrency;
  rephrase_opts.max_attempts = config.service.max_attempts;

  std::vector<Stage> stages;
  {
    Stage s{"ingest", {{"strict", config.strict}, {"shards", config.shards}}, {}, {"index"}, {}};
    s.inputs = {{"detections", config.detections}, {"narrations", config.narrations}};
    if (config.videos) s.inputs["videos"] = *config.videos;
    s.run = [&] {
      return ingest_stage({config.detections, config.narrations, config.videos, config.strict,
                           config.shards, out / "index"});
    };
    stages.push_back(std::move(s));
  }
  {
    const auto& c = config.curate;
    json budget = std::holds_alternative<std::size_t>(c.budget.value)
                      ? json(std::get<std::size_t>(c.budget.value))
                      : json(std::get<double>(c.budget.value));
    Stage s{"curate",
            {{"clip_len_s", c.clip_len_s},
             {"frames_per_clip", c.frames_per_clip},
             {"min_tail_s", c.min_tail_s},
             {"budget", budget},
             {"mode", c.mode == curation::PairingMode::uniform ? "uniform" : "narration-centered"},
             {"scope", c.scope == curation::RankScope::global ? "global" : "per_video"},
             {"half_width_s", c.half_width_s}},
            {{"index", out / "index"}},
            {"scored.jsonl"},
            [&] { return curate_stage({out / "index", curate_opts, out / "scored.jsonl"}); }};
    stages.push_back(std::move(s));
  }
  stages.push_back(
      {"crop",
       {{"margin", config.crop.margin_frac},
        {"hull_mode", config.crop.mode == spatial::HullMode::per_clip ? "per_clip" : "per_frame"}},
       {{"scored", out / "scored.jsonl"}},
       {"cropped.jsonl"},
       [&] { return crop_stage({out / "scored.jsonl", config.crop, out / "cropped.jsonl"}); }});
  {
    Stage s{"narrate",
            {{"align_threshold", config.align_threshold},
             {"ppl_max", config.ppl_max},
             {"merge_policy", narration::to_string(config.merge_policy)},
             {"few_shot", few_shot_identity(config)},
             {"instruction", rephrase_opts.instruction},
             {"service", service_identity(config, options)}},
            {{"clips", out / "cropped.jsonl"}},
            {"rephrased.jsonl", "exo_ego.jsonl", "exo_ego.meta.json"},
            {}};
    if (config.captions) {
      s.inputs["captions"] = *config.captions;
      s.outputs.push_back("generated.jsonl");
    }
    s.run = [&] {
      json r = json::object();
      r["rephrase"] = rephrase_stage(
          {out / "cropped.jsonl", config.align_threshold, rephrase_opts, out / "rephrased.jsonl"}, *client);
      std::optional<fs::path> generated;
      if (config.captions) {
        generated = out / "generated.jsonl";
        r["captions"] = captions_stage({*config.captions, config.ppl_max, config.strict, *generated});
      }
      r["merge"] = merge_stage({out / "cropped.jsonl", out / "rephrased.jsonl", generated,
                                config.merge_policy, out / "exo_ego.jsonl"});
      return r;
    };
    stages.push_back(std::move(s));
  }
  {
    Stage s{"assemble",
            {{"frames_per_clip", config.curate.frames_per_clip}},
            {{"exo_ego", out / "exo_ego.jsonl"}},
            {"manifest.jsonl", "manifest.meta.json"},
            {}};
    if (config.ego_narrations) s.inputs["ego_narrations"] = *config.ego_narrations;
    s.run = [&] {
      return assemble_stage({std::nullopt, config.ego_narrations, out / "exo_ego.jsonl",
                             config.curate.frames_per_clip, out / "manifest.jsonl"});
    };
    stages.push_back(std::move(s));
  }

  json run_report = {{"stages", json::array()}};
  for (auto& stage : stages) {
    const auto started = std::chrono::steady_clock::now();
    json report;
    bool skipped = false;
    try {
      const auto key = stage_key(stage);
      const auto stamp_path = stamps / (stage.name + ".json");
      if (options.resume && fs::exists(stamp_path)) {
        const auto stamp = json::parse(core::read_file(stamp_path), nullptr, false);
        if (!stamp.is_discarded() && stamp.value("key", "") == key &&
            stamp.value("outputs", json()) == output_digests(out, stage.outputs)) {
          report = stamp.at("report");
          skipped = true;
        }
      }
      if (!skipped) {
        log.info("stage_start", {{"stage", stage.name}});
        report = stage.run();
        write_report(reports / (stage.name + ".json"), report);
        json stamp = {{"key", key}, {"outputs", output_digests(out, stage.outputs)}, {"report", report}};
        core::write_file_atomic(stamp_path, stamp.dump(2) + "\n");
      }
    } catch (...) {
      try {
        rethrow_in_stage(stage.name);
      } catch (const std::exception& e) {
        log.error("stage_failed", {{"stage", stage.name}, {"error", e.what()}});
        throw;
      }
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - started)
                        .count();
    log.info(skipped ? "stage_skipped" : "stage_done",
             {{"stage", stage.name}, {"elapsed_ms", ms}, {"report", report}});
    run_report["stages"].push_back({{"stage", stage.name}, {"report", report}});
  }

  const auto& st = run_report["stages"];
  const auto& assembled = st[4]["report"];
  run_report["totals"] = {
      {"videos", st[0]["report"]["videos"]},
      {"detection_records", st[0]["report"]["detection_records"]},
      {"narration_records", st[0]["report"]["narration_records"]},
      {"candidate_clips", st[1]["report"]["candidate_clips"]},
      {"selected_clips", st[1]["report"]["selected_clips"]},
      {"manifest_entries", assembled["entries"]},
      {"ego_pairs", assembled["ego"]["pair_count"]},
      {"ego_videos", assembled["ego"]["video_count"]},
      {"exo_ego_pairs", assembled["exo_ego"]["pair_count"]},
      {"exo_ego_videos", assembled["exo_ego"]["video_count"]},
  };
  write_report(out / "run_report.json", run_report);
  log.info("run_done", {{"totals", run_report["totals"]}});
  return run_report;
}

}  // namespace embed::pipeline
