// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <limits>

#include "embed/core/errors.hpp"
#include "embed/core/hash.hpp"
#include "embed/core/json.hpp"
#include "embed/core/jsonl.hpp"
#include "embed/core/manifest.hpp"
#include "embed/core/numeric.hpp"
#include "embed/core/validate.hpp"
#include "support/generators.hpp"

using namespace embed;
using namespace embed::core;
using embed::testing::Rng;

TEST_CASE("box validation") {
  CHECK(validate(BoundingBox{0, 0, 10, 10}, 20, 20).ok());
  CHECK(validate(BoundingBox{10, 0, 5, 10}).has_rule("x_min ≤ x_max"));
  CHECK(validate(BoundingBox{0, 10, 5, 0}).has_rule("y_min ≤ y_max"));
  CHECK(validate(BoundingBox{-1, 0, 5, 5}).has_rule("coordinates ≥ 0"));
  CHECK(validate(BoundingBox{0, 0, 30, 10}, 20, 20).has_rule("box within frame"));
  CHECK(validate(BoundingBox{0, 0, std::nan(""), 1}).has_rule("coordinates finite"));
  CHECK(validate(BoundingBox{3, 3, 3, 3}).ok());  // degenerate but ordered
}

TEST_CASE("hand probability range") {
  HandDetection h{{0, 0, 1, 1}, 1.2, HandSide::left, true};
  CHECK(validate(h).has_rule("0 ≤ probability ≤ 1"));
  h.probability = 1.0;
  CHECK(validate(h).ok());
}

TEST_CASE("frame validation reports nested paths") {
  FrameDetections f{"v", 1.0, 100, 100, {{{10, 0, 5, 10}, 0.5, HandSide::left, false}}, {}};
  auto r = validate(f);
  REQUIRE_FALSE(r.ok());
  CHECK(r.violations()[0].path.find("hands[0]") != std::string::npos);
  f.frame_width = 0;
  CHECK(validate(f).has_rule("frame dimensions > 0"));
  f = {"v", -1.0, 10, 10, {}, {}};
  CHECK(validate(f).has_rule("timestamp_s ≥ 0"));
}

TEST_CASE("clip validation") {
  CHECK(validate(ClipRecord{"v", 0, 5, {0.625, 1.875}}).ok());
  CHECK(validate(ClipRecord{"v", 5, 5, {}}).has_rule("start_s < end_s"));
  CHECK(validate(ClipRecord{"v", 0, 5, {5.0}}).has_rule("frame_refs within [start_s, end_s)"));
  CHECK(validate(ClipRecord{"v", 0, 5, {2, 1}}).has_rule("frame_refs strictly increasing"));
}

TEST_CASE("scored clip validation") {
  ScoredClip s{{"v", 0, 5, {1, 2}}, 1.0, {{1, 0.5}, {0, 0.5}}};
  CHECK(validate(s).ok());
  s.hoi_score = 0.9;
  CHECK(validate(s).has_rule("hoi_score equals mean of per_frame_terms"));
  s.hoi_score = 2.5;
  CHECK(validate(s).has_rule("0 ≤ hoi_score ≤ 2"));
}

TEST_CASE("narration validation ties optional fields to source") {
  NarrationRecord n{"v", 1, "cut onion", NarrationSource::original_asr, 0.7, std::nullopt, {}};
  CHECK(validate(n).ok());
  n.alignability.reset();
  CHECK(validate(n).has_rule("alignability present iff source ∈ {original_asr, rephrased}"));
  n = {"v", 1, "C cuts", NarrationSource::narrator_generated, std::nullopt, 3.2, {}};
  CHECK(validate(n).ok());
  n.perplexity.reset();
  CHECK(validate(n).has_rule("perplexity present iff source = narrator_generated"));
  n = {"v", 1, "", NarrationSource::ego_manual, std::nullopt, std::nullopt, {}};
  CHECK(validate(n).has_rule("text nonempty"));
}

TEST_CASE("numeric helpers") {
  CHECK(shortest_repr(0.1) == "0.1");
  CHECK(shortest_repr(5.0) == "5");
  CHECK(shortest_repr(0.0) == "0");
  CHECK(shortest_repr(-0.0) == "-0.0");
  CHECK(shortest_repr(1e-20) == "1e-20");
  CHECK_THROWS_AS(shortest_repr(std::numeric_limits<double>::infinity()), DataError);

  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> xs(static_cast<std::size_t>(embed::testing::uniform_int(rng, 0, 300)));
    for (auto& x : xs) x = embed::testing::uniform(rng, -1, 1);
    long double naive = 0;
    for (double x : xs) naive += x;
    CHECK(std::abs(pairwise_sum(xs) - static_cast<double>(naive)) < 1e-12);
    const double v = embed::testing::uniform(rng, -1e6, 1e6);
    CHECK(std::stod(shortest_repr(v)) == v);
  }
}

TEST_CASE("hashes match published vectors") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  Sha256 h;
  h.update("a").update("bc");
  CHECK(h.hex_digest() == sha256_hex("abc"));
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("json writer escapes and orders keys as written") {
  JsonWriter w;
  w.begin_object().key("b").value("q\"\n\x01").key("a").value(1).key("c").null().end_object();
  CHECK(w.str() == R"({"b":"q\"\n\u0001","a":1,"c":null})");
}

TEST_CASE("record codecs round-trip") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    auto f = embed::testing::random_frame(rng, "vid" + std::to_string(i % 7), embed::testing::uniform(rng, 0, 100));
    CHECK(from_json<FrameDetections>(to_json(f)) == f);
    auto n = embed::testing::random_narration(rng, "v", embed::testing::uniform(rng, 0, 50));
    n.generation_meta["beam_size"] = std::int64_t{5};
    n.generation_meta["unchanged"] = true;
    n.generation_meta["score"] = 0.25;
    n.generation_meta["note"] = std::string("x");
    CHECK(from_json<NarrationRecord>(to_json(n)) == n);
  }
  ManifestEntry e;
  e.clip = {"v", 0, 5, {1, 2}};
  e.crop_region = BoundingBox{1, 2, 3, 4};
  e.frame_width = 640;
  e.frame_height = 360;
  e.narration = {"v", 1, "cut", NarrationSource::rephrased, 0.9, std::nullopt, {}};
  const auto text = to_json(e);
  CHECK(text.find("\"frame_size\":[640,360]") != std::string::npos);
  CHECK(from_json<ManifestEntry>(text) == e);
  CHECK(to_json(from_json<ManifestEntry>(text)) == text);
}

TEST_CASE("decoder errors are data errors") {
  CHECK_THROWS_AS(from_json<ClipRecord>("{"), DataError);
  CHECK_THROWS_AS(from_json<ClipRecord>(R"({"video_id":"v","start_s":"0","end_s":5,"frame_refs":[]})"),
                  DataError);
  CHECK_THROWS_AS(from_json<HandDetection>(R"({"box":[0,0,1,1],"probability":0.5,"side":"middle","in_contact":true})"),
                  DataError);
}

TEST_CASE("canonical order and stats") {
  auto entry = [](Domain d, std::string vid, double start, double t) {
    ManifestEntry e;
    e.domain = d;
    e.clip = {vid, start, start + 5, {}};
    e.narration = {vid, t, "text", NarrationSource::ego_manual, std::nullopt, std::nullopt, {}};
    return e;
  };
  std::vector<ManifestEntry> es = {entry(Domain::exo_ego, "b", 0, 1), entry(Domain::ego, "a", 5, 6),
                                   entry(Domain::ego, "a", 0, 2), entry(Domain::ego, "a", 0, 1)};
  canonical_sort(es);
  CHECK(es[0].narration.timestamp_s == 1);
  CHECK(es[1].narration.timestamp_s == 2);
  CHECK(es[2].clip.start_s == 5);
  CHECK(es[3].clip.video_id == "b");
  const auto stats = compute_stats(es);
  CHECK(stats.ego == DomainStats{1, 3});
  CHECK(stats.exo_ego == DomainStats{1, 1});
}

TEST_CASE("jsonl reader skips blank lines and counts them") {
  embed::testing::TempDir dir("jsonl");
  write_file_atomic(dir / "a/b.jsonl", "{}\n\n  \r\n{\"x\":1}\r\n");
  JsonlReader r(dir / "a/b.jsonl");
  std::string line;
  REQUIRE(r.next(line));
  CHECK(line == "{}");
  REQUIRE(r.next(line));
  CHECK(line == "{\"x\":1}");
  CHECK(r.line_number() == 4);
  CHECK_FALSE(r.next(line));
  CHECK_THROWS_AS(read_file(dir / "missing"), IoError);
}

TEST_CASE("fast frame decoder agrees with the DOM decoder") {
  Rng rng(13);
  const std::vector<std::pair<std::string, std::string>> edits = {
      {"\"frame_width\":640", "\"frame_width\":640.0"},
      {"\"frame_width\":640", "\"frame_width\":640,\"frame_width\":320"},
      {"\"side\":\"left\"", "\"side\":\"middle\""},
      {"\"side\":\"left\"", "\"side\":\"\\u006ceft\""},
      {"\"in_contact\":true", "\"in_contact\":1"},
      {"\"objects\":[", "\"extra\":{\"a\":[1,2]},\"objects\":["},
      {"\"timestamp_s\":", "\"timestamp_s\":1e400,\"t\":"},
      {"\"hands\":[", "\"hands\":[1,"},
      {"\"video_id\":\"", "\"video_id\":\"\\u00e9"},
      {"}", "} x"},
  };
  std::size_t fast_hits = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    auto f = embed::testing::random_frame(rng, "vid" + std::to_string(trial % 5), embed::testing::uniform(rng, 0, 1e4));
    if (embed::testing::coin(rng, 0.1)) f.timestamp_s = static_cast<double>(embed::testing::uniform_int(rng, 0, 100));
    std::string line = to_json(f);
    if (trial % 3 == 0) {
      const auto& [from, to] = edits[static_cast<std::size_t>(trial / 3) % edits.size()];
      if (auto pos = line.find(from); pos != std::string::npos) line.replace(pos, from.size(), to);
    }
    std::optional<FrameDetections> slow;
    try {
      slow = parse_frame(parse_json_text(line));
    } catch (const DataError&) {
    }
    const auto fast = parse_frame_fast(line);
    if (fast) {
      ++fast_hits;
      REQUIRE(slow);
      CHECK(*fast == *slow);
    }
    if (trial % 3 != 0) CHECK(fast.has_value());
  }
  CHECK(fast_hits > 2000);
}
