// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "embed/assembly/assembly.hpp"
#include "embed/core/errors.hpp"
#include "embed/core/jsonl.hpp"
#include "support/generators.hpp"

using namespace embed;
using namespace embed::assembly;
using core::DatasetManifest;
using core::Domain;
using core::ManifestEntry;
using embed::testing::Rng;
using embed::testing::TempDir;

namespace {

ManifestEntry entry(Domain d, std::string vid, double start, bool crop = false) {
  ManifestEntry e;
  e.domain = d;
  e.clip = {vid, start, start + 5, {start + 2.5}};
  e.narration = {vid, start + 1, "C opens the door",
                 d == Domain::ego ? core::NarrationSource::ego_manual : core::NarrationSource::rephrased,
                 d == Domain::ego ? std::nullopt : std::optional<double>(0.8), std::nullopt, {}};
  if (crop) {
    e.crop_region = core::BoundingBox{10, 10, 100, 100};
    e.frame_width = 640;
    e.frame_height = 360;
  }
  return e;
}

DatasetManifest ego3_exo2() {
  auto ego = make_manifest({entry(Domain::ego, "e1", 0), entry(Domain::ego, "e1", 5), entry(Domain::ego, "e2", 0)},
                           {"ego.jsonl"});
  auto exo = make_manifest({entry(Domain::exo_ego, "x1", 0, true), entry(Domain::exo_ego, "x2", 10, true)},
                           {"exo.jsonl"});
  return concat_datasets(ego, exo);
}

DatasetManifest random_manifest(Rng& rng, std::size_t n, const std::string& prefix) {
  std::vector<ManifestEntry> es;
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = embed::testing::coin(rng) ? Domain::ego : Domain::exo_ego;
    es.push_back(entry(d, prefix + (d == Domain::ego ? "e" : "x") + std::to_string(i % 13),
                       5.0 * static_cast<double>(i), embed::testing::coin(rng)));
  }
  return make_manifest(std::move(es), {prefix});
}

}  // namespace

TEST_CASE("concatenation counts per domain") {
  const auto m = ego3_exo2();
  CHECK(m.entries.size() == 5);
  CHECK(m.stats.ego == core::DomainStats{2, 3});
  CHECK(m.stats.exo_ego == core::DomainStats{2, 2});
  CHECK(m.created_from == std::vector<std::string>{"ego.jsonl", "exo.jsonl"});
  CHECK(m.entries.front().domain == Domain::ego);
  CHECK(m.entries.back().domain == Domain::exo_ego);
}

TEST_CASE("concatenation with an empty manifest is the identity") {
  auto ego = make_manifest({entry(Domain::ego, "e1", 0), entry(Domain::ego, "e2", 0)}, {"ego.jsonl"});
  const auto joined = concat_datasets(ego, make_manifest({}, {}));
  CHECK(joined == ego);
}

TEST_CASE("concatenation is associative and stats-additive") {
  Rng rng(40);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = random_manifest(rng, 7, "a");
    const auto b = random_manifest(rng, 5, "b");
    const auto c = random_manifest(rng, 9, "c");
    const auto left = concat_datasets(concat_datasets(a, b), c);
    const auto right = concat_datasets(a, concat_datasets(b, c));
    CHECK(left == right);
    CHECK(left.stats.ego.pair_count == a.stats.ego.pair_count + b.stats.ego.pair_count + c.stats.ego.pair_count);
    CHECK(left.stats.exo_ego.pair_count ==
          a.stats.exo_ego.pair_count + b.stats.exo_ego.pair_count + c.stats.exo_ego.pair_count);
  }
}

TEST_CASE("a video id under both domains is rejected") {
  auto ego = make_manifest({entry(Domain::ego, "shared", 0)}, {});
  auto exo = make_manifest({entry(Domain::exo_ego, "shared", 0)}, {});
  CHECK_THROWS_AS(concat_datasets(ego, exo), DataError);
}

TEST_CASE("ego entries use the recorded window or the fallback") {
  core::NarrationRecord a{"e", 4.0, "C cuts", core::NarrationSource::ego_manual, std::nullopt, std::nullopt, {}};
  a.generation_meta["clip_start_s"] = 3.0;
  a.generation_meta["clip_end_s"] = 5.5;
  core::NarrationRecord b{"e", 0.2, "C opens", core::NarrationSource::ego_manual, std::nullopt, std::nullopt, {}};
  const auto es = ego_entries(std::vector{a, b}, 0.5, 4);
  REQUIRE(es.size() == 2);
  const auto& wa = es[0].clip.start_s == 3.0 ? es[0] : es[1];
  const auto& wb = es[0].clip.start_s == 3.0 ? es[1] : es[0];
  CHECK(wa.clip.end_s == 5.5);
  CHECK(wa.clip.frame_refs.size() == 4);
  CHECK(wb.clip.start_s == 0.0);
  CHECK(wb.clip.end_s == 0.7);
  CHECK(wa.domain == Domain::ego);
  CHECK_FALSE(wa.crop_region);
}

TEST_CASE("write, read, write gives identical bytes") {
  TempDir dir("manifest");
  const auto m = ego3_exo2();
  write_manifest(m, dir / "m.jsonl");
  const auto bytes = core::read_file(dir / "m.jsonl");
  const auto meta = core::read_file(dir / "m.meta.json");
  const auto back = read_manifest(dir / "m.jsonl");
  CHECK(back == m);
  write_manifest(back, dir / "m2.jsonl");
  CHECK(core::read_file(dir / "m2.jsonl") == bytes);
  CHECK(core::read_file(dir / "m2.meta.json") == meta);
  CHECK(meta_path_for(dir / "m.jsonl") == dir / "m.meta.json");
}

TEST_CASE("a stats header that disagrees with the entries fails on read") {
  TempDir dir("manifest");
  write_manifest(ego3_exo2(), dir / "m.jsonl");
  auto meta = nlohmann::json::parse(core::read_file(dir / "m.meta.json"));
  meta["stats"]["ego"]["pair_count"] = 4;
  core::write_file_atomic(dir / "m.meta.json", meta.dump());
  CHECK_THROWS_AS(read_manifest(dir / "m.jsonl"), DataError);
}

TEST_CASE("golden fixture stats match a recount of its entries") {
  const std::filesystem::path path = EMBED_GOLDEN_DIR "/fixture_manifest.jsonl";
  std::map<std::string, std::set<std::string>> videos;
  std::map<std::string, long> pairs;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    const auto domain = j.at("domain").get<std::string>();
    ++pairs[domain];
    videos[domain].insert(j.at("clip").at("video_id").get<std::string>());
  }
  const auto meta = nlohmann::json::parse(core::read_file(EMBED_GOLDEN_DIR "/fixture_manifest.meta.json"));
  for (const auto* d : {"ego", "exo_ego"}) {
    CHECK(meta["stats"][d]["pair_count"].get<long>() == pairs[d]);
    CHECK(meta["stats"][d]["video_count"].get<std::size_t>() == videos[d].size());
  }
  const auto m = read_manifest(path);
  CHECK(static_cast<long>(m.entries.size()) == pairs["ego"] + pairs["exo_ego"]);
}

TEST_CASE("sampler determinism and referential integrity") {
  Rng rng(41);
  const auto m = random_manifest(rng, 200, "r");
  CHECK(sample_batch(m, 32, 9) == sample_batch(m, 32, 9));
  CHECK(sample_batch(m, 32, 9) != sample_batch(m, 32, 10));
  BatchSampler sampler(m, {16, 3, std::nullopt});
  CHECK(sampler.steps_per_epoch() == 12);
  for (std::uint64_t step = 0; step < 30; ++step) {
    const auto batch = sampler.batch(step);
    CHECK(batch.size() == 16);
    std::set<std::size_t> ids;
    for (const auto& s : batch) {
      REQUIRE(s.manifest_entry_id < m.entries.size());
      const auto& e = m.entries[s.manifest_entry_id];
      CHECK(s.narration == e.narration.text);
      CHECK(s.domain == e.domain);
      if (!e.crop_region) CHECK(s.view == View::original);
      ids.insert(s.manifest_entry_id);
    }
    CHECK(ids.size() == batch.size());
  }
  // A fresh sampler at a later step agrees with one that walked there.
  BatchSampler fresh(m, {16, 3, std::nullopt});
  CHECK(fresh.batch(29) == sampler.batch(29));
  CHECK_THROWS_AS(sample_batch(m, 201, 1), DataError);
}

TEST_CASE("ego fraction fixes the domain mix of each batch") {
  Rng rng(42);
  const auto m = random_manifest(rng, 300, "f");
  BatchSampler sampler(m, {20, 5, 0.25});
  for (std::uint64_t step = 0; step < 10; ++step) {
    std::size_t ego = 0;
    for (const auto& s : sampler.batch(step)) ego += s.domain == Domain::ego;
    CHECK(ego == 5);
  }
}

TEST_CASE("cropped view frequency is a fair coin") {
  std::vector<ManifestEntry> es;
  for (int i = 0; i < 100; ++i) es.push_back(entry(Domain::exo_ego, "x" + std::to_string(i), 0, true));
  const auto m = make_manifest(std::move(es), {});
  BatchSampler sampler(m, {100, 7, std::nullopt});
  std::size_t cropped = 0, total = 0;
  for (std::uint64_t step = 0; step < 1000; ++step)
    for (const auto& s : sampler.batch(step)) {
      cropped += s.view == View::cropped;
      ++total;
    }
  const double frac = static_cast<double>(cropped) / static_cast<double>(total);
  CHECK(frac >= 0.49);
  CHECK(frac <= 0.51);
}

TEST_CASE("seeded helpers are fixed functions") {
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
  auto p = seeded_permutation(50, 11);
  CHECK(p == seeded_permutation(50, 11));
  std::sort(p.begin(), p.end());
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i] == i);
}
