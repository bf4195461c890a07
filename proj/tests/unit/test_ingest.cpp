// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>

#include "embed/core/errors.hpp"
#include "embed/core/json.hpp"
#include "embed/core/jsonl.hpp"
#include "embed/ingest/ingest.hpp"
#include "support/generators.hpp"

using namespace embed;
using namespace embed::ingest;
using embed::testing::Rng;
using embed::testing::TempDir;

namespace {

std::string frame_line(const std::string& vid, double t, const std::string& box = "[0,0,10,10]") {
  return R"({"video_id":")" + vid + R"(","timestamp_s":)" +
         std::to_string(t) + R"(,"frame_width":100,"frame_height":100,"hands":[{"box":)" + box +
         R"(,"probability":0.9,"side":"left","in_contact":true}],"objects":[]})";
}

std::string narration_line(const std::string& vid, double t, const std::string& text) {
  return R"({"video_id":")" + vid + R"(","timestamp_s":)" + std::to_string(t) + R"(,"text":")" + text +
         R"(","source":"original_asr","alignability":0.8})";
}

std::size_t count_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) ++n;
  return n;
}

}  // namespace

TEST_CASE("three valid detection records") {
  TempDir dir("ingest");
  core::write_file_atomic(dir / "d.jsonl", frame_line("a", 1) + "\n" + frame_line("a", 0.5) + "\n" +
                                               frame_line("b", 2) + "\n");
  auto r = ingest_detections(dir / "d.jsonl", true);
  CHECK(r.report.indexed == 3);
  CHECK(r.report.skipped == 0);
  CHECK(r.index.detection_count() == 3);
  CHECK(r.index.detections_by_video.at("a")[0].timestamp_s == 0.5);
}

TEST_CASE("inverted box: lenient skips, strict fails with line context") {
  TempDir dir("ingest");
  core::write_file_atomic(dir / "d.jsonl",
                          frame_line("a", 1) + "\n" + frame_line("a", 2, "[10,0,5,10]") + "\n");
  auto lenient = ingest_detections(dir / "d.jsonl", false);
  CHECK(lenient.report.indexed == 1);
  CHECK(lenient.report.skipped == 1);
  REQUIRE(lenient.report.samples.size() == 1);
  CHECK(lenient.report.samples[0].find("x_min ≤ x_max") != std::string::npos);
  try {
    ingest_detections(dir / "d.jsonl", true);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("x_min ≤ x_max") != std::string::npos);
  }
}

TEST_CASE("malformed json line is a data error") {
  TempDir dir("ingest");
  core::write_file_atomic(dir / "d.jsonl", frame_line("a", 1) + "\n{not json\n");
  CHECK_THROWS_AS(ingest_detections(dir / "d.jsonl", true), DataError);
  CHECK(ingest_detections(dir / "d.jsonl", false).report.skipped == 1);
}

TEST_CASE("schema header") {
  TempDir dir("ingest");
  core::write_file_atomic(dir / "ok.jsonl", "{\"schema_version\":\"1.3\"}\n" + frame_line("a", 1) + "\n");
  auto ok = ingest_detections(dir / "ok.jsonl", true);
  CHECK(ok.report.lines == 1);
  CHECK(ok.report.indexed == 1);
  core::write_file_atomic(dir / "bad.jsonl", "{\"schema_version\":\"2.0\"}\n" + frame_line("a", 1) + "\n");
  CHECK_THROWS_AS(ingest_detections(dir / "bad.jsonl", false), DataError);
}

TEST_CASE("narrations out of order are indexed time-sorted; empty text rejected; duplicates dropped") {
  TempDir dir("ingest");
  core::write_file_atomic(dir / "n.jsonl", narration_line("v", 9, "pour water") + "\n" +
                                               narration_line("v", 3, "cut onion") + "\n" +
                                               narration_line("v", 3, "cut onion") + "\n" +
                                               narration_line("v", 4, "") + "\n");
  auto r = ingest_narrations(dir / "n.jsonl", false);
  const auto& ns = r.index.narrations_by_video.at("v");
  REQUIRE(ns.size() == 2);
  CHECK(ns[0].timestamp_s == 3);
  CHECK(ns[1].timestamp_s == 9);
  CHECK(r.report.skipped == 1);
  CHECK(r.report.duplicates == 1);
  CHECK(r.report.samples[0].find("text nonempty") != std::string::npos);
}

TEST_CASE("fixture narrations: indexed count equals an independent line count") {
  const std::filesystem::path path = EMBED_FIXTURE_DIR "/narrations.jsonl";
  auto r = ingest_narrations(path, true);
  CHECK(r.report.indexed == count_lines(path));
  CHECK(r.index.narration_count() == 30);
}

TEST_CASE("index is a function of the input multiset") {
  Rng rng(5);
  std::vector<std::string> lines;
  for (int i = 0; i < 300; ++i) {
    // Coarse timestamps force many ties.
    auto f = embed::testing::random_frame(rng, "v" + std::to_string(i % 4), embed::testing::uniform_int(rng, 0, 20) * 0.5);
    lines.push_back(core::to_json(f));
  }
  TempDir dir("perm");
  core::write_file_atomic(dir / "a.jsonl", core::join_lines(lines));
  const auto base = ingest_detections(dir / "a.jsonl", true).index;
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(lines.begin(), lines.end(), rng);
    core::write_file_atomic(dir / "b.jsonl", core::join_lines(lines));
    auto shuffled = ingest_detections(dir / "b.jsonl", true).index;
    shuffled.source_tag = base.source_tag;  // tag records the file name only
    CHECK(shuffled == base);
  }
}

TEST_CASE("save and load round-trip the index") {
  TempDir dir("save");
  auto det = ingest_detections(EMBED_FIXTURE_DIR "/detections.jsonl", true);
  auto nar = ingest_narrations(EMBED_FIXTURE_DIR "/narrations.jsonl", true);
  auto vid = ingest_videos(EMBED_FIXTURE_DIR "/videos.jsonl", true);
  auto index = std::move(det.index);
  merge_into(index, std::move(nar.index));
  merge_into(index, std::move(vid.index));
  index.source_tag = "fixture";
  save_index(index, dir / "idx", det.report, 3);
  CHECK(load_index(dir / "idx") == index);
  CHECK(std::filesystem::exists(dir / "idx/detections-00000-of-00003.jsonl"));

  // Tampering with a shard trips the count check.
  core::write_file_atomic(dir / "idx/detections-00000-of-00003.jsonl", "");
  CHECK_THROWS_AS(load_index(dir / "idx"), DataError);
}

TEST_CASE("video durations") {
  CorpusIndex index;
  index.detections_by_video["a"] = {{"a", 12.3, 10, 10, {}, {}}};
  CHECK(video_duration(index, "a", 5.0) == 15.0);
  index.videos["a"] = {"a", 12.0, 10, 10};
  CHECK(video_duration(index, "a", 5.0) == 12.0);
}

TEST_CASE("ego narration filter") {
  auto rec = [](std::string text) {
    return core::NarrationRecord{"e", 1, std::move(text), core::NarrationSource::ego_manual, {}, {}, {}};
  };
  std::vector<core::NarrationRecord> in = {rec("C turns on a light"), rec("#unsure action here maybe"),
                                           rec("opens door"), rec("#Unsure"), rec("C  cuts   the bread")};
  auto r = filter_ego_narrations(in);
  REQUIRE(r.kept.size() == 2);
  CHECK(r.kept[0].text == "C turns on a light");
  CHECK(r.report.dropped_unsure == 2);
  CHECK(r.report.dropped_short == 1);
  CHECK(token_count("  a b\tc\n") == 3);
}

TEST_CASE("ego filter bookkeeping and idempotence on random corpora") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<core::NarrationRecord> in;
    for (int i = 0; i < 40; ++i) in.push_back(embed::testing::random_narration(rng, "v", i));
    auto r = filter_ego_narrations(in);
    CHECK(r.kept.size() + r.dropped.size() == in.size());
    CHECK(r.report.dropped_unsure + r.report.dropped_short == r.dropped.size());
    CHECK(filter_ego_narrations(r.kept).kept == r.kept);
  }
}

TEST_CASE("one million detection records load time-sorted") {
  TempDir dir("big");
  Rng rng(1);
  {
    std::ofstream out(dir / "big.jsonl");
    for (int i = 0; i < 1'000'000; ++i) {
      out << R"({"video_id":"v)" << (i % 100) << R"(","timestamp_s":)"
          << embed::testing::uniform_int(rng, 0, 3'600'000) / 1000.0
          << R"(,"frame_width":640,"frame_height":360,"hands":[],"objects":[]})" << '\n';
    }
  }
  auto r = ingest_detections(dir / "big.jsonl", true);
  CHECK(r.report.indexed == 1'000'000);
  bool sorted = true;
  for (const auto& [vid, frames] : r.index.detections_by_video)
    for (std::size_t i = 1; i < frames.size(); ++i) sorted = sorted && frames[i - 1].timestamp_s <= frames[i].timestamp_s;
  CHECK(sorted);
}
