// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "embed/core/errors.hpp"
#include "embed/verification/infonce.hpp"
#include "embed/verification/metrics.hpp"
#include "embed/verification/suite.hpp"
#include "support/generators.hpp"

using namespace embed;
using namespace embed::verification;
using core::EmbeddingBatch;
using core::Matrix;
using embed::testing::Rng;

namespace {

Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c) {
  Matrix m(r, c);
  for (auto& v : m.values()) v = embed::testing::uniform(rng, -1, 1);
  return m;
}

// Loss straight from the definition, in long double without max-shifting.
double loss_oracle(const Matrix& s, double tau) {
  const std::size_t b = s.rows();
  long double total = 0;
  for (std::size_t i = 0; i < b; ++i) {
    long double row = 0, col = 0;
    for (std::size_t j = 0; j < b; ++j) {
      row += std::exp(static_cast<long double>(s(i, j)) / tau);
      col += std::exp(static_cast<long double>(s(j, i)) / tau);
    }
    const long double d = static_cast<long double>(s(i, i)) / tau;
    total += (std::log(row) - d) + (std::log(col) - d);
  }
  return static_cast<double>(total / b);
}

double ap_oracle(const std::vector<double>& rel) {
  double hits = 0, sum = 0;
  for (std::size_t k = 0; k < rel.size(); ++k)
    if (rel[k] > 0) sum += ++hits / static_cast<double>(k + 1);
  return sum / hits;
}

}  // namespace

TEST_CASE("similarity examples") {
  EmbeddingBatch id{Matrix(3, 3), Matrix(3, 3), 0.07};
  for (std::size_t i = 0; i < 3; ++i) id.video_embeddings(i, i) = id.text_embeddings(i, i) = 1;
  const auto s = similarity_matrix(id);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(s(i, j) == (i == j ? 1.0 : 0.0));

  EmbeddingBatch one{Matrix(1, 3), Matrix(1, 3), 0.07};
  one.video_embeddings.row(0)[0] = 2;
  one.video_embeddings.row(0)[2] = 3;
  one.text_embeddings.row(0)[0] = 0.5;
  one.text_embeddings.row(0)[2] = -1;
  CHECK(similarity_matrix(one)(0, 0) == -2.0);

  Rng rng(50);
  EmbeddingBatch b{random_matrix(rng, 4, 8), random_matrix(rng, 4, 8), 0.07};
  const auto sb = similarity_matrix(b);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      double d = 0;
      for (std::size_t k = 0; k < 8; ++k) d += b.video_embeddings(i, k) * b.text_embeddings(j, k);
      CHECK(std::abs(sb(i, j) - d) < 1e-12);
    }

  CHECK_THROWS_AS(similarity_matrix({Matrix(2, 3), Matrix(2, 4), 0.07}), DataError);
}

TEST_CASE("loss worked examples") {
  Matrix one(1, 1, 0.3);
  CHECK(info_nce_from_similarity(one, 0.07) == 0.0);
  CHECK_FALSE(std::signbit(info_nce_from_similarity(one, 0.07)));

  Matrix s(2, 2);
  s(0, 0) = s(1, 1) = 10;
  s(0, 1) = s(1, 0) = -10;
  // Each of the four softmaxes gives -log(1/(1+e^-20)).
  const double expected = 2 * std::log1p(std::exp(-20.0));
  CHECK(std::abs(expected - 4.1223e-9) < 1e-12);
  CHECK(std::abs(info_nce_from_similarity(s, 1.0) - expected) < 1e-12);

  CHECK_THROWS_AS(info_nce_from_similarity(s, 0.0), DataError);
  s(0, 1) = std::nan("");
  CHECK_THROWS_AS(info_nce_from_similarity(s, 1.0), DataError);
}

TEST_CASE("loss matches the definition and is non-negative") {
  Rng rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const auto b = static_cast<std::size_t>(embed::testing::uniform_int(rng, 1, 10));
    const auto s = random_matrix(rng, b, b);
    const double tau = embed::testing::uniform(rng, 0.2, 2.0);
    const double loss = info_nce_from_similarity(s, tau);
    CHECK(loss >= 0.0);
    CHECK(std::abs(loss - loss_oracle(s, tau)) < 1e-10);
  }
}

TEST_CASE("large diagonal margin drives the loss to zero") {
  for (double margin : {1.0, 10.0, 100.0}) {
    Matrix s(4, 4, 0.0);
    for (std::size_t i = 0; i < 4; ++i) s(i, i) = margin;
    const double loss = info_nce_from_similarity(s, 0.5);
    CHECK(loss > 0.0);
    if (margin == 100.0) CHECK(loss < 1e-80);
  }
}

TEST_CASE("gradients match central differences") {
  Rng rng(52);
  for (int trial = 0; trial < 3; ++trial) {
    EmbeddingBatch b{random_matrix(rng, 8, 16), random_matrix(rng, 8, 16), 0.07};
    const auto report = info_nce_loss(b);
    const double h = 1e-5;
    double worst = 0;
    for (int which = 0; which < 2; ++which) {
      auto& m = which ? b.text_embeddings : b.video_embeddings;
      const auto& g = which ? report.gradient_text : report.gradient_video;
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < m.cols(); ++k) {
          const double keep = m(i, k);
          m(i, k) = keep + h;
          const double up = info_nce_loss(b).loss;
          m(i, k) = keep - h;
          const double down = info_nce_loss(b).loss;
          m(i, k) = keep;
          const double fd = (up - down) / (2 * h);
          worst = std::max(worst, std::abs(fd - g(i, k)) / std::max(1.0, std::abs(fd)));
        }
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("loss invariances") {
  Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    EmbeddingBatch b{random_matrix(rng, 6, 5), random_matrix(rng, 6, 5), 0.07};
    const double base = info_nce_loss(b).loss;

    std::vector<std::size_t> perm(6);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    EmbeddingBatch p{Matrix(6, 5), Matrix(6, 5), 0.07};
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t k = 0; k < 5; ++k) {
        p.video_embeddings(i, k) = b.video_embeddings(perm[i], k);
        p.text_embeddings(i, k) = b.text_embeddings(perm[i], k);
      }
    CHECK(std::abs(info_nce_loss(p).loss - base) < 1e-10);

    auto s = similarity_matrix(b);
    for (auto& v : s.values()) v += 3.7;
    CHECK(std::abs(info_nce_from_similarity(s, 0.07) - base) < 1e-10);

    const double lambda = embed::testing::uniform(rng, 0.5, 2.0);
    EmbeddingBatch scaled = b;
    for (auto& v : scaled.video_embeddings.values()) v *= lambda;
    for (auto& v : scaled.text_embeddings.values()) v *= lambda;
    EmbeddingBatch retau = b;
    retau.temperature = 0.07 / (lambda * lambda);
    CHECK(std::abs(info_nce_loss(scaled).loss - info_nce_loss(retau).loss) < 1e-10);
  }
}

TEST_CASE("average precision examples") {
  const std::vector<std::vector<double>> perfect = {{1, 0, 0}};
  CHECK(mean_average_precision(perfect).map == 1.0);
  CHECK(average_precision(std::vector<double>{0, 1}) == 0.5);
  CHECK_FALSE(average_precision(std::vector<double>{0, 0}));
  const std::vector<std::vector<double>> mixed = {{0, 1}, {0, 0}, {1, 1}};
  const auto r = mean_average_precision(mixed);
  CHECK(r.queries == 2);
  CHECK(r.excluded == 1);
  CHECK(r.map == 0.75);
}

TEST_CASE("average precision over every binary list up to length 8") {
  for (std::size_t n = 1; n <= 8; ++n)
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<double> rel(n);
      for (std::size_t i = 0; i < n; ++i) rel[i] = (mask >> i) & 1u;
      const auto ap = average_precision(rel);
      REQUIRE(ap);
      CHECK(std::abs(*ap - ap_oracle(rel)) < 1e-12);
    }
}

TEST_CASE("ndcg examples and brute-force ideal") {
  CHECK(ndcg(std::vector<double>{3, 2, 1, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ndcg(std::vector<double>{0, 0, 0}) == 0.0);
  CHECK_THROWS(ndcg(std::vector<double>{1, -1}));

  Rng rng(54);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> gains(8);
    for (auto& g : gains) g = embed::testing::uniform_int(rng, 0, 3);
    auto sorted = gains;
    std::sort(sorted.begin(), sorted.end());
    double best = 0;
    do {
      double d = 0;
      for (std::size_t i = 0; i < sorted.size(); ++i) d += sorted[i] / std::log2(static_cast<double>(i) + 2);
      best = std::max(best, d);
    } while (std::next_permutation(sorted.begin(), sorted.end()));
    double got = 0;
    for (std::size_t i = 0; i < gains.size(); ++i) got += gains[i] / std::log2(static_cast<double>(i) + 2);
    const double expected = best == 0 ? 0 : got / best;
    const double value = ndcg(gains);
    CHECK(std::abs(value - expected) < 1e-9);
    CHECK(value >= 0.0);
    CHECK(value <= 1.0 + 1e-15);
  }
}

TEST_CASE("mcq prediction and accuracy") {
  CHECK(mcq_prediction(std::vector<double>{0.1, 0.9, 0.3, 0.2, 0.0}) == 1);
  CHECK(mcq_prediction(std::vector<double>{0.5, 0.9, 0.9, 0.2, 0.0}) == 1);

  std::vector<McqQuestion> qs = {{{0.1, 0.9, 0.3, 0.2, 0.0}, 1, McqGroup::intra},
                                 {{0.5, 0.9, 0.9, 0.2, 0.0}, 2, McqGroup::intra},
                                 {{0.5, 0.9, 0.9, 0.2, 0.0}, 1, McqGroup::inter}};
  const auto r = mcq_accuracy(qs);
  CHECK(r.intra_accuracy() == 0.5);
  CHECK(r.inter_accuracy() == 1.0);

  qs[0].similarities.pop_back();
  CHECK_THROWS_AS(mcq_accuracy(qs), DataError);
  qs[0].similarities.push_back(0);
  qs[0].answer = 5;
  CHECK_THROWS_AS(mcq_accuracy(qs), DataError);
  CHECK_FALSE(mcq_accuracy(std::vector<McqQuestion>{}).intra_accuracy());
}

TEST_CASE("mcq accuracy matches a recount") {
  Rng rng(55);
  std::vector<McqQuestion> qs;
  std::size_t correct[2] = {0, 0}, total[2] = {0, 0};
  for (int i = 0; i < 100; ++i) {
    McqQuestion q;
    for (int c = 0; c < 5; ++c) q.similarities.push_back(embed::testing::uniform_int(rng, 0, 4) * 0.25);
    q.answer = static_cast<std::size_t>(embed::testing::uniform_int(rng, 0, 4));
    q.group = embed::testing::coin(rng) ? McqGroup::intra : McqGroup::inter;
    const auto g = q.group == McqGroup::intra ? 0 : 1;
    const double top = *std::max_element(q.similarities.begin(), q.similarities.end());
    const auto first = static_cast<std::size_t>(
        std::find(q.similarities.begin(), q.similarities.end(), top) - q.similarities.begin());
    correct[g] += first == q.answer;
    ++total[g];
    qs.push_back(std::move(q));
  }
  const auto r = mcq_accuracy(qs);
  CHECK(r.intra_total == total[0]);
  CHECK(r.intra_correct == correct[0]);
  CHECK(r.inter_correct == correct[1]);
}

TEST_CASE("built-in verification suites pass") {
  for (const auto& c : run_infonce_suite()) CHECK_MESSAGE(c.passed, c.name);
  for (const auto& c : run_metrics_suite()) CHECK_MESSAGE(c.passed, c.name);
}
