// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

// Runtime self-checks behind `embed verify`. Every oracle here is written
// independently of the implementation it checks: plain loops, closed forms,
// exhaustive enumeration and finite differences.

#include "embed/verification/suite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "embed/verification/infonce.hpp"
#include "embed/verification/metrics.hpp"

namespace embed::verification {

using core::EmbeddingBatch;
using core::Matrix;

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, bool unit_rows) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    double norm = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      m(i, j) = normal(rng);
      norm += m(i, j) * m(i, j);
    }
    if (unit_rows)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) /= std::sqrt(norm);
  }
  return m;
}

CheckResult check(std::string name, double error, double tolerance) {
  return {std::move(name), error <= tolerance, error, tolerance};
}

double loss_of(const Matrix& v, const Matrix& t, double tau) {
  return info_nce_loss(EmbeddingBatch{v, t, tau}).loss;
}

double rel_error(const Matrix& a, const Matrix& b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    diff += std::pow(a.values()[i] - b.values()[i], 2);
    na += std::pow(a.values()[i], 2);
    nb += std::pow(b.values()[i], 2);
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), 1e-300});
}

Matrix finite_difference(const Matrix& v, const Matrix& t, double tau, bool wrt_video, double h) {
  Matrix g(v.rows(), v.cols());
  for (std::size_t i = 0; i < v.rows(); ++i) {
    for (std::size_t c = 0; c < v.cols(); ++c) {
      Matrix vp = v, vm = v, tp = t, tm = t;
      if (wrt_video) {
        vp(i, c) += h;
        vm(i, c) -= h;
      } else {
        tp(i, c) += h;
        tm(i, c) -= h;
      }
      g(i, c) = (loss_of(vp, tp, tau) - loss_of(vm, tm, tau)) / (2 * h);
    }
  }
  return g;
}

double brute_ap(const std::vector<double>& rel) {
  double total = 0.0;
  int relevant = 0;
  for (std::size_t i = 0; i < rel.size(); ++i) {
    if (rel[i] <= 0) continue;
    ++relevant;
    int above = 0;
    for (std::size_t j = 0; j <= i; ++j) above += rel[j] > 0;
    total += static_cast<double>(above) / static_cast<double>(i + 1);
  }
  return total / relevant;
}

double brute_dcg(const std::vector<double>& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g[i] / std::log2(static_cast<double>(i) + 2.0);
  return s;
}

}  // namespace

std::vector<CheckResult> run_infonce_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);

  {
    Matrix v = random_matrix(rng, 4, 8, false), t = random_matrix(rng, 4, 8, false);
    Matrix s = similarity_matrix({v, t, 1.0});
    double err = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        double d = 0.0;
        for (std::size_t k = 0; k < 8; ++k) d += v(i, k) * t(j, k);
        err = std::max(err, std::abs(d - s(i, j)));
      }
    out.push_back(check("similarity matches naive triple loop", err, 1e-12));
  }
  {
    Matrix v = random_matrix(rng, 1, 16, true), t = random_matrix(rng, 1, 16, true);
    out.push_back(check("B=1 loss is exactly zero", std::abs(loss_of(v, t, 0.07)), 0.0));
  }
  {
    Matrix s(2, 2);
    s(0, 0) = s(1, 1) = 10;
    s(0, 1) = s(1, 0) = -10;
    const double expected = 2.0 * std::log1p(std::exp(-20.0));
    out.push_back(check("2x2 closed form 2*log(1+e^-20)",
                        std::abs(info_nce_from_similarity(s, 1.0) - expected), 1e-12));
  }
  {
    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      Matrix v = random_matrix(rng, 8, 16, true), t = random_matrix(rng, 8, 16, true);
      auto report = info_nce_loss({v, t, 0.07});
      worst = std::max(worst, rel_error(report.gradient_video, finite_difference(v, t, 0.07, true, 1e-5)));
      worst = std::max(worst, rel_error(report.gradient_text, finite_difference(v, t, 0.07, false, 1e-5)));
    }
    out.push_back(check("gradients match central differences (h=1e-5)", worst, 1e-5));
  }
  {
    Matrix v = random_matrix(rng, 8, 16, true), t = random_matrix(rng, 8, 16, true);
    std::vector<std::size_t> perm(8);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix vp(8, 16), tp(8, 16);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t c = 0; c < 16; ++c) {
        vp(i, c) = v(perm[i], c);
        tp(i, c) = t(perm[i], c);
      }
    out.push_back(check("loss invariant under paired row permutation",
                        std::abs(loss_of(v, t, 0.07) - loss_of(vp, tp, 0.07)), 1e-10));

    Matrix s = similarity_matrix({v, t, 0.07}), shifted = s;
    for (auto& x : shifted.values()) x += 3.25;
    out.push_back(check("loss invariant under constant shift of S",
                        std::abs(info_nce_from_similarity(s, 0.07) -
                                 info_nce_from_similarity(shifted, 0.07)),
                        1e-10));

    const double lambda = 1.7;
    Matrix vs = v, ts = t;
    for (auto& x : vs.values()) x *= lambda;
    for (auto& x : ts.values()) x *= lambda;
    out.push_back(check("scaling embeddings by s equals tau/s^2",
                        std::abs(loss_of(vs, ts, 0.07) - loss_of(v, t, 0.07 / (lambda * lambda))),
                        1e-10));
  }
  return out;
}

std::vector<CheckResult> run_metrics_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);

  {
    double err = 0.0;
    for (std::size_t n = 1; n <= 8; ++n) {
      for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<double> rel(n);
        for (std::size_t i = 0; i < n; ++i) rel[i] = (mask >> i) & 1u;
        err = std::max(err, std::abs(*average_precision(rel) - brute_ap(rel)));
      }
    }
    out.push_back(check("AP matches brute force on all binary lists (n <= 8)", err, 1e-9));
  }
  {
    double err = 0.0;
    for (std::size_t n = 1; n <= 6; ++n) {
      std::size_t configs = 1;
      for (std::size_t i = 0; i < n; ++i) configs *= 3;
      for (std::size_t code = 0; code < configs; ++code) {
        std::vector<double> g(n);
        for (std::size_t i = 0, c = code; i < n; ++i, c /= 3) g[i] = static_cast<double>(c % 3);
        std::vector<double> perm = g;
        std::sort(perm.begin(), perm.end());
        double best = 0.0;
        do best = std::max(best, brute_dcg(perm));
        while (std::next_permutation(perm.begin(), perm.end()));
        const double expected = best == 0.0 ? 0.0 : brute_dcg(g) / best;
        err = std::max(err, std::abs(ndcg(g) - expected));
      }
    }
    out.push_back(check("nDCG matches brute-force ideal DCG (gains 0..2, n <= 6)", err, 1e-9));
  }
  {
    std::uniform_int_distribution<int> level(0, 3), pick(0, 4), coin(0, 1);
    std::vector<McqQuestion> qs;
    std::size_t intra_ok = 0, intra_n = 0, inter_ok = 0, inter_n = 0;
    for (int q = 0; q < 1000; ++q) {
      McqQuestion question;
      for (int c = 0; c < 5; ++c) question.similarities.push_back(level(rng));
      question.answer = static_cast<std::size_t>(pick(rng));
      question.group = coin(rng) ? McqGroup::intra : McqGroup::inter;
      const double top = *std::max_element(question.similarities.begin(), question.similarities.end());
      bool ok = question.similarities[question.answer] == top;
      for (std::size_t c = 0; c < question.answer; ++c) ok = ok && question.similarities[c] != top;
      (question.group == McqGroup::intra ? intra_n : inter_n)++;
      (question.group == McqGroup::intra ? intra_ok : inter_ok) += ok;
      qs.push_back(std::move(question));
    }
    auto r = mcq_accuracy(qs);
    const double err = static_cast<double>(
        (r.intra_correct != intra_ok) + (r.inter_correct != inter_ok) + (r.intra_total != intra_n) +
        (r.inter_total != inter_n));
    out.push_back(check("MCQ accuracy matches recount (1000 questions)", err, 0.0));
  }
  return out;
}

}  // namespace embed::verification
