// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

// embed: command-line front end for the curation pipeline.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "embed/core/errors.hpp"
#include "embed/narration/prompt.hpp"
#include "embed/pipeline/config.hpp"
#include "embed/pipeline/pipeline.hpp"
#include "embed/pipeline/stages.hpp"
#include "embed/verification/suite.hpp"

namespace {

namespace fs = std::filesystem;
namespace pl = embed::pipeline;
using embed::curation::PairingMode;
using embed::curation::RankScope;

struct Common {
  bool quiet = false;
  int workers = 1;
  std::string report;
};

void finish(pl::Logger& log, const Common& common, const std::string& stage, const pl::Report& r) {
  if (!common.report.empty()) pl::write_report(common.report, r);
  log.info("stage_done", {{"stage", stage}, {"report", r}});
}

void add_report_flag(CLI::App* cmd, Common& common) {
  cmd->add_option("--report", common.report, "Also write the stage report (JSON) to this path");
}

int run_verify(const std::string& suite, std::uint64_t seed) {
  std::vector<embed::verification::CheckResult> results;
  if (suite == "infonce" || suite == "all") {
    auto r = embed::verification::run_infonce_suite(seed);
    results.insert(results.end(), r.begin(), r.end());
  }
  if (suite == "metrics" || suite == "all") {
    auto r = embed::verification::run_metrics_suite(seed);
    results.insert(results.end(), r.begin(), r.end());
  }
  bool ok = true;
  for (const auto& c : results) {
    std::printf("%s  %-58s max_err=%.3e tol=%.1e\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                c.max_error, c.tolerance);
    ok = ok && c.passed;
  }
  std::printf("%zu checks, %s\n", results.size(), ok ? "all passed" : "FAILURES");
  return ok ? pl::kExitOk : pl::kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "embed: curate hand-object-interaction clips from third-person video, attach\n"
      "first-person style narrations, and assemble a deterministic training manifest.\n\n"
      "Exit codes: 0 ok, 1 usage, 2 config, 3 I/O, 4 data, 5 completion service,\n"
      "6 verification failure. Logs are JSON lines on stderr.\n\n"
      "Environment:\n"
      "  EMBED_LLM_URL    completion endpoint used by `narrate --mode rephrase` and `run`\n"
      "  EMBED_LLM_TOKEN  bearer token sent to that endpoint"};
  app.require_subcommand(1);
  Common common;
  app.add_flag("-q,--quiet", common.quiet, "Suppress info and warning logs");

  std::function<int(pl::Logger&)> action;

  // ingest ------------------------------------------------------------------
  pl::IngestArgs ingest;
  std::string videos;
  auto* c_ingest = app.add_subcommand("ingest", "Validate and index detection and narration records");
  c_ingest->add_option("--detections", ingest.detections, "Frame detections (JSON Lines)")->required();
  c_ingest->add_option("--narrations", ingest.narrations, "Timestamped ASR narrations (JSON Lines)")->required();
  c_ingest->add_option("--videos", videos, "Optional per-video durations and frame sizes (JSON Lines)");
  c_ingest->add_flag("--strict,!--lenient", ingest.strict,
                     "Fail on the first malformed record (default) or skip and count it")
      ->default_val(true);
  c_ingest->add_option("--shards", ingest.shards, "Shard count for the persisted index")
      ->default_val(4)
      ->check(CLI::Range(1, 4096));
  c_ingest->add_option("--out", ingest.out_dir, "Index directory")->required();
  add_report_flag(c_ingest, common);
  c_ingest->callback([&] {
    action = [&](pl::Logger& log) {
      if (!videos.empty()) ingest.videos = videos;
      finish(log, common, "ingest", pl::ingest_stage(ingest));
      return 0;
    };
  });

  // curate ------------------------------------------------------------------
  pl::CurateArgs curate;
  std::string budget = "0.6", mode = "uniform", scope = "global";
  auto* c_curate = app.add_subcommand("curate", "Segment, score and select clips by hand-object interaction");
  c_curate->add_option("--index", curate.index_dir, "Index directory written by `ingest`")->required();
  c_curate->add_option("--clip-len", curate.options.clip_len_s, "Clip length in seconds")->default_val(5.0);
  c_curate->add_option("--frames", curate.options.frames_per_clip, "Frames sampled per clip")
      ->default_val(4)
      ->check(CLI::PositiveNumber);
  c_curate->add_option("--min-tail", curate.options.min_tail_s,
                       "Shortest trailing partial clip kept, in seconds")
      ->default_val(1.0);
  c_curate->add_option("--budget", budget, "Clips to keep: a count (250) or a fraction (0.6)")
      ->default_val("0.6");
  c_curate->add_option("--mode", mode, "Clip construction")
      ->check(CLI::IsMember({"uniform", "narration-centered"}))
      ->default_val("uniform");
  c_curate->add_option("--scope", scope, "Rank globally or apply the budget within each video")
      ->check(CLI::IsMember({"global", "per_video"}))
      ->default_val("global");
  c_curate->add_option("--half-width", curate.options.half_width_s,
                       "Half-width of narration-centered clips, in seconds")
      ->default_val(2.5);
  c_curate->add_option("--workers", common.workers, "Scoring threads")->default_val(1)->check(CLI::PositiveNumber);
  c_curate->add_option("--out", curate.out, "Scored clips (JSON Lines)")->required();
  add_report_flag(c_curate, common);
  c_curate->callback([&] {
    action = [&](pl::Logger& log) {
      curate.options.budget = embed::curation::Budget::parse(budget);
      curate.options.mode = mode == "uniform" ? PairingMode::uniform : PairingMode::narration_centered;
      curate.options.scope = scope == "global" ? RankScope::global : RankScope::per_video;
      curate.options.workers = common.workers;
      finish(log, common, "curate", pl::curate_stage(curate));
      return 0;
    };
  });

  // crop --------------------------------------------------------------------
  pl::CropArgs crop;
  std::string hull = "per_clip";
  auto* c_crop = app.add_subcommand("crop", "Attach a margin-expanded hull of hand and object boxes");
  c_crop->add_option("--scored", crop.scored, "Scored clips from `curate`")->required();
  c_crop->add_option("--margin", crop.options.margin_frac, "Margin as a fraction of hull width/height")
      ->default_val(0.1)
      ->check(CLI::NonNegativeNumber);
  c_crop->add_option("--hull", hull, "One region per clip, or also one per sampled frame")
      ->check(CLI::IsMember({"per_clip", "per_frame"}))
      ->default_val("per_clip");
  c_crop->add_option("--out", crop.out, "Cropped clips (JSON Lines)")->required();
  add_report_flag(c_crop, common);
  c_crop->callback([&] {
    action = [&](pl::Logger& log) {
      crop.options.mode = hull == "per_clip" ? embed::spatial::HullMode::per_clip
                                             : embed::spatial::HullMode::per_frame;
      finish(log, common, "crop", pl::crop_stage(crop));
      return 0;
    };
  });

  // narrate -----------------------------------------------------------------
  std::string n_mode, n_clips, n_captions, n_rephrased, n_generated, n_out, n_few_shot, n_stub, n_url;
  std::string n_policy = "both";
  double align = 0.5, ppl_max = 10.0;
  int concurrency = 8, attempts = 3, timeout_ms = 30000;
  bool n_strict = true;
  auto* c_narrate = app.add_subcommand("narrate", "Produce first-person narrations for curated clips");
  c_narrate->add_option("--mode", n_mode,
                        "rephrase: few-shot rewrite of paired ASR text; ingest-captions: load and\n"
                        "perplexity-filter narrator captions; merge: write the exo_ego manifest")
      ->check(CLI::IsMember({"rephrase", "ingest-captions", "merge"}))
      ->required();
  c_narrate->add_option("--clips", n_clips, "Cropped clips (rephrase, merge)");
  c_narrate->add_option("--captions", n_captions, "Narrator captions (ingest-captions)");
  c_narrate->add_option("--rephrased", n_rephrased, "Rephrased narrations (merge)");
  c_narrate->add_option("--generated", n_generated, "Filtered narrator captions (merge)");
  c_narrate->add_option("--policy", n_policy, "Which narration sources to pair (merge)")
      ->check(CLI::IsMember({"both", "prefer_rephrased", "prefer_generated"}))
      ->default_val("both");
  c_narrate->add_option("--align-threshold", align, "Keep ASR sentences with alignability >= this")
      ->default_val(0.5);
  c_narrate->add_option("--ppl-max", ppl_max, "Keep captions with perplexity <= this")->default_val(10.0);
  c_narrate->add_option("--few-shot", n_few_shot, "Few-shot pairs {\"exo\",\"ego\"} (JSON Lines)");
  c_narrate->add_option("--stub-responses", n_stub,
                        "Canned completions {\"input\",\"output\"}; no network is used");
  c_narrate->add_option("--url", n_url, "Completion endpoint; defaults to EMBED_LLM_URL");
  c_narrate->add_option("--concurrency", concurrency, "In-flight completion requests")
      ->default_val(8)
      ->check(CLI::PositiveNumber);
  c_narrate->add_option("--max-attempts", attempts, "Attempts per request on transient errors")
      ->default_val(3)
      ->check(CLI::PositiveNumber);
  c_narrate->add_option("--timeout-ms", timeout_ms, "Per-request timeout")->default_val(30000);
  c_narrate->add_flag("--strict,!--lenient", n_strict, "Caption ingest error handling")->default_val(true);
  c_narrate->add_option("--out", n_out, "Output path")->required();
  add_report_flag(c_narrate, common);
  c_narrate->callback([&] {
    action = [&](pl::Logger& log) {
      auto need = [](const std::string& v, const char* flag) {
        if (v.empty()) throw embed::ConfigError(std::string("narrate: ") + flag + " is required in this mode");
      };
      pl::Report r;
      if (n_mode == "rephrase") {
        need(n_clips, "--clips");
        pl::ServiceConfig service;
        if (!n_stub.empty()) service.stub = n_stub;
        if (!n_url.empty()) service.url = n_url;
        service.timeout = std::chrono::milliseconds(timeout_ms);
        auto client = pl::make_client(service);
        pl::RephraseArgs args{n_clips, align, {}, n_out};
        if (!n_few_shot.empty()) args.options.few_shot_pairs = embed::narration::load_few_shot_pairs(n_few_shot);
        args.options.concurrency = concurrency;
        args.options.max_attempts = attempts;
        r = pl::rephrase_stage(args, *client);
      } else if (n_mode == "ingest-captions") {
        need(n_captions, "--captions");
        r = pl::captions_stage({n_captions, ppl_max, n_strict, n_out});
      } else {
        need(n_clips, "--clips");
        pl::MergeArgs args{n_clips, std::nullopt, std::nullopt,
                           *embed::narration::parse_merge_policy(n_policy), n_out};
        if (!n_rephrased.empty()) args.rephrased = n_rephrased;
        if (!n_generated.empty()) args.generated = n_generated;
        r = pl::merge_stage(args);
      }
      finish(log, common, "narrate:" + n_mode, r);
      return 0;
    };
  });

  // assemble ----------------------------------------------------------------
  std::string a_ego, a_ego_narr, a_exo;
  pl::AssembleArgs assemble;
  auto* c_assemble = app.add_subcommand("assemble", "Concatenate ego and exo_ego data into one manifest");
  c_assemble->add_option("--ego", a_ego, "Ego manifest (with its .meta.json)");
  c_assemble->add_option("--ego-narrations", a_ego_narr,
                         "Raw ego narrations; #unsure and short sentences are dropped");
  c_assemble->add_option("--exo", a_exo, "exo_ego manifest from `narrate --mode merge`");
  c_assemble->add_option("--frames", assemble.frames_per_clip, "Frame refs per ego clip")->default_val(4);
  c_assemble->add_option("--out", assemble.out, "Combined manifest")->required();
  add_report_flag(c_assemble, common);
  c_assemble->callback([&] {
    action = [&](pl::Logger& log) {
      if (!a_ego.empty()) assemble.ego_manifest = a_ego;
      if (!a_ego_narr.empty()) assemble.ego_narrations = a_ego_narr;
      if (!a_exo.empty()) assemble.exo_manifest = a_exo;
      finish(log, common, "assemble", pl::assemble_stage(assemble));
      return 0;
    };
  });

  // sample ------------------------------------------------------------------
  pl::SampleArgs sample;
  double ego_fraction = -1.0;
  auto* c_sample = app.add_subcommand("sample", "Draw seeded training batches from a manifest");
  c_sample->add_option("--manifest", sample.manifest, "Combined manifest")->required();
  c_sample->add_option("--batch", sample.batch_size, "Batch size")->default_val(1024)->check(CLI::PositiveNumber);
  c_sample->add_option("--seed", sample.seed, "Sampler seed")->default_val(0);
  c_sample->add_option("--steps", sample.steps, "Number of batches")->default_val(1);
  c_sample->add_option("--ego-fraction", ego_fraction,
                       "Fixed share of ego entries per batch; default pools both domains")
      ->check(CLI::Range(0.0, 1.0));
  c_sample->add_option("--out", sample.out, "Batches (JSON Lines, one sample per line)")->required();
  add_report_flag(c_sample, common);
  c_sample->callback([&] {
    action = [&](pl::Logger& log) {
      if (ego_fraction >= 0.0) sample.ego_fraction = ego_fraction;
      finish(log, common, "sample", pl::sample_stage(sample));
      return 0;
    };
  });

  // verify ------------------------------------------------------------------
  std::string suite = "all";
  std::uint64_t verify_seed = 7;
  auto* c_verify = app.add_subcommand("verify", "Run the loss and metric oracle suites");
  c_verify->add_option("--suite", suite, "Which suite to run")
      ->check(CLI::IsMember({"infonce", "metrics", "all"}))
      ->default_val("all");
  c_verify->add_option("--seed", verify_seed, "Seed for the randomized checks")->default_val(7);
  c_verify->callback([&] { action = [&](pl::Logger&) { return run_verify(suite, verify_seed); }; });

  // run ---------------------------------------------------------------------
  std::string config_path;
  bool resume = false;
  int run_workers = 0;
  std::string run_out;
  auto* c_run = app.add_subcommand("run", "Run ingest, curate, crop, narrate and assemble from a config");
  c_run->add_option("--config", config_path, "Pipeline config (JSON)")->required();
  c_run->add_flag("--resume", resume, "Skip stages whose inputs and config are unchanged");
  c_run->add_option("--workers", run_workers, "Override the config's worker count")->check(CLI::PositiveNumber);
  c_run->add_option("--output-dir", run_out, "Override the config's output_dir");
  c_run->callback([&] {
    action = [&](pl::Logger& log) {
      auto config = pl::load_config(config_path);
      if (!run_out.empty()) config.output_dir = run_out;
      pl::RunOptions options;
      options.resume = resume;
      if (run_workers > 0) options.workers = run_workers;
      pl::run_pipeline(config, options, log);
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? pl::kExitOk : pl::kExitUsage;
  }

  pl::Logger log(common.quiet);
  try {
    return action(log);
  } catch (const std::exception& e) {
    const int code = pl::exit_code_for_current_exception();
    log.error("failed", {{"error", e.what()}, {"exit_code", code}});
    return code;
  }
}
