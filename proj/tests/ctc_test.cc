// tests/ctc_test.cc

// Copyright 2026  The ctckit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "ctckit/ctc.h"

#include <doctest.h>

#include <cmath>

#include "ctckit/error.h"
#include "test_util.h"

using namespace ctckit;
using namespace ctckit::testing;

TEST_SUITE_BEGIN("ctc");

TEST_CASE("softmax_frame uniform logits give a uniform distribution") {
  Vector logits(29, 1.25);
  Vector probs = softmax_frame(logits);
  for (double p : probs) CHECK(p == doctest::Approx(1.0 / 29).epsilon(1e-12));
  double sum = 0.0;
  for (double p : probs) sum += p;
  CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("softmax_frame two-point closed form") {
  Vector probs = softmax_frame({0.0, std::log(2.0)});
  CHECK(probs[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(probs[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("softmax_frame is shift invariant") {
  auto rng = seeded_rng(7, "softmax-shift");
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vector logits(5);
    for (double& v : logits) v = unif(rng);
    const double shift = unif(rng);
    Vector shifted = logits;
    for (double& v : shifted) v += shift;
    Vector a = softmax_frame(logits), b = softmax_frame(shifted);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
  }
}

TEST_CASE("expand_with_blanks") {
  CHECK(expand_with_blanks({3, 4}) == std::vector<int>{0, 3, 0, 4, 0});
  CHECK(expand_with_blanks({}) == std::vector<int>{0});
  CHECK(expand_with_blanks({3, 3}) == std::vector<int>{0, 3, 0, 3, 0});
}

TEST_CASE("ctc_loss single frame, single alignment") {
  // T=1, P(a)=0.5: the only alignment is (a), so loss = -ln 0.5
  OutputMatrix out = outputs_from_probs({{0.5, 0.5}});
  CtcResult res = ctc_loss(out, {1});
  CHECK(res.loss == doctest::Approx(-std::log(0.5)).epsilon(1e-14));
}

TEST_CASE("ctc_loss T=2 uniform: three of four alignments reach the target") {
  // alignments (a,a), (a,-), (-,a) carry 3/4 of the mass
  OutputMatrix out = outputs_from_probs({{0.5, 0.5}, {0.5, 0.5}});
  CtcResult res = ctc_loss(out, {1});
  CHECK(res.loss == doctest::Approx(-std::log(0.75)).epsilon(1e-12));
}

TEST_CASE("ctc_loss rejects a repeated label without room for the separating blank") {
  OutputMatrix out = outputs_from_probs({{0.5, 0.5}, {0.5, 0.5}});
  CHECK_THROWS_WITH_AS(ctc_loss(out, {1, 1}), doctest::Contains("target too long"), Error);
}

TEST_CASE("ctc_loss rejects a non-normalized output matrix") {
  OutputMatrix out;
  out.logp = Matrix(2, 2, std::log(0.4));  // rows sum to 0.8
  CHECK_THROWS_WITH_AS(ctc_loss(out, {1}), doctest::Contains("not normalized"), Error);
}

TEST_CASE("ctc_loss empty target equals the all-blank path") {
  OutputMatrix out = outputs_from_probs({{0.7, 0.3}});
  CtcResult res = ctc_loss(out, {});
  CHECK(res.loss == doctest::Approx(-std::log(0.7)).epsilon(1e-14));
  double bf = ctc_loss_bruteforce(out, {});
  CHECK(std::abs(res.loss - bf) <= 1e-12);
}

TEST_CASE("oracle equivalence: forward-backward matches exhaustive enumeration") {
  auto rng = seeded_rng(2024, "ctc-oracle-unit");
  std::uniform_int_distribution<int> t_dist(1, 6), s_dist(2, 4);
  for (int trial = 0; trial < 60; ++trial) {
    const int t_len = t_dist(rng), n_symbols = s_dist(rng);
    OutputMatrix out = random_outputs(t_len, n_symbols, &rng);
    LabelSequence target = random_feasible_target(t_len, n_symbols, 3, &rng);
    const double dp = ctc_loss(out, target).loss;
    const double bf = ctc_loss_bruteforce(out, target);
    CHECK(std::abs(dp - bf) <= 1e-9);
  }
}

TEST_CASE("ctc_loss gradient matches central differences on the logits") {
  auto rng = seeded_rng(11, "ctc-grad");
  std::uniform_int_distribution<int> t_dist(2, 5), s_dist(2, 4);
  for (int trial = 0; trial < 20; ++trial) {
    const int t_len = t_dist(rng), n_symbols = s_dist(rng);
    Matrix logits = random_matrix(t_len, n_symbols, &rng);
    LabelSequence target = random_feasible_target(t_len, n_symbols, 3, &rng);
    CtcResult res = ctc_loss(log_softmax(logits), target);
    const double eps = 1e-5;
    for (int t = 0; t < t_len; ++t) {
      for (int k = 0; k < n_symbols; ++k) {
        const double saved = logits(t, k);
        logits(t, k) = saved + eps;
        const double plus = ctc_loss(log_softmax(logits), target).loss;
        logits(t, k) = saved - eps;
        const double minus = ctc_loss(log_softmax(logits), target).loss;
        logits(t, k) = saved;
        const double fd = (plus - minus) / (2 * eps);
        const double an = res.logit_grad(t, k);
        const double rel = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-4});
        CHECK(rel <= 1e-4);
      }
    }
  }
}

TEST_CASE("collapse partitions the alignment space: labeling losses sum to one") {
  auto rng = seeded_rng(5, "ctc-partition");
  const int t_len = 3, n_symbols = 3;
  OutputMatrix out = random_outputs(t_len, n_symbols, &rng);
  // every labeling over {1,2} with a feasible expansion for T=3
  std::vector<LabelSequence> labelings = {{}};
  for (int len = 1; len <= t_len; ++len) {
    std::vector<LabelSequence> next;
    for (int a = 1; a < n_symbols; ++a)
      for (const auto& prev : labelings)
        if (static_cast<int>(prev.size()) == len - 1) {
          LabelSequence l = prev;
          l.push_back(a);
          next.push_back(l);
        }
    labelings.insert(labelings.end(), next.begin(), next.end());
  }
  double total = 0.0;
  for (const auto& labeling : labelings) {
    if (min_alignment_frames(labeling) > t_len) continue;
    total += std::exp(-ctc_loss(out, labeling).loss);
  }
  CHECK(std::abs(total - 1.0) <= 1e-9);
}

TEST_CASE("appending a frame of positive probabilities keeps targets feasible") {
  auto rng = seeded_rng(6, "ctc-monotone");
  for (int trial = 0; trial < 20; ++trial) {
    const int t_len = 4, n_symbols = 3;
    OutputMatrix out = random_outputs(t_len, n_symbols, &rng);
    LabelSequence target = random_feasible_target(t_len, n_symbols, 3, &rng);
    CHECK_NOTHROW(ctc_loss(out, target));
    OutputMatrix longer;
    longer.logp = Matrix(t_len + 1, n_symbols);
    for (int t = 0; t < t_len; ++t)
      for (int k = 0; k < n_symbols; ++k) longer.logp(t, k) = out.logp(t, k);
    for (int k = 0; k < n_symbols; ++k) longer.logp(t_len, k) = std::log(1.0 / n_symbols);
    CHECK_NOTHROW(ctc_loss(longer, target));
  }
}

TEST_CASE("ctc_loss_bruteforce refuses oversized instances") {
  auto rng = seeded_rng(1, "budget");
  OutputMatrix out = random_outputs(12, 4, &rng);
  CHECK_THROWS_WITH_AS(ctc_loss_bruteforce(out, {1}, 1000000), doctest::Contains("budget"), Error);
}

TEST_CASE("ctc_loss_bruteforce is finite for strictly positive outputs") {
  auto rng = seeded_rng(3, "bf-finite");
  OutputMatrix out = random_outputs(4, 3, &rng);
  LabelSequence target = {1, 2};
  CHECK(std::isfinite(ctc_loss_bruteforce(out, target)));
}

TEST_CASE("alignment_probability basics") {
  OutputMatrix out = outputs_from_probs({{0.2, 0.8}});
  CHECK(alignment_probability(out, {1}) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(alignment_probability(out, {0}) == doctest::Approx(0.2).epsilon(1e-14));

  // uniform over 3 symbols, T=2: every alignment has probability 1/9
  OutputMatrix uni = outputs_from_probs({{1. / 3, 1. / 3, 1. / 3}, {1. / 3, 1. / 3, 1. / 3}});
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      CHECK(alignment_probability(uni, {a, b}) == doctest::Approx(1.0 / 9).epsilon(1e-12));

  CHECK_THROWS_WITH_AS(alignment_probability(out, {1, 1}), doctest::Contains("length"), Error);
}

TEST_CASE("alignment probability never exceeds the per-column maximum product") {
  auto rng = seeded_rng(8, "align-bound");
  OutputMatrix out = random_outputs(4, 3, &rng);
  double bound = 0.0;
  for (int t = 0; t < 4; ++t) {
    double best = out.logp(t, 0);
    for (int k = 1; k < 3; ++k) best = std::max(best, out.logp(t, k));
    bound += best;
  }
  std::uniform_int_distribution<int> sym(0, 2);
  for (int trial = 0; trial < 30; ++trial) {
    Alignment a = {sym(rng), sym(rng), sym(rng), sym(rng)};
    CHECK(alignment_probability(out, a) <= std::exp(bound) + 1e-15);
  }
}

TEST_SUITE_END();
