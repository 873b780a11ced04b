// tests/model_test.cc

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

#include "ctckit/model.h"

#include <doctest.h>

#include <cmath>

#include "ctckit/dataset.h"
#include "ctckit/error.h"
#include "test_util.h"

using namespace ctckit;
using namespace ctckit::testing;

TEST_SUITE_BEGIN("model");

namespace {

std::vector<LayerKind> kinds_of(const LayerStack& stack) {
  std::vector<LayerKind> kinds;
  for (const auto& layer : stack) kinds.push_back(layer->spec().kind);
  return kinds;
}

std::vector<Sample> as_batch(const std::vector<Utterance>& utts) {
  std::vector<Sample> batch;
  for (const auto& u : utts) batch.push_back({&u.id, &u.features, &u.labels});
  return batch;
}

Utterance make_utt(const std::string& id, int t_len, int dim, LabelSequence labels,
                   std::uint64_t seed) {
  Utterance utt;
  utt.id = id;
  auto rng = seeded_rng(seed, id);
  utt.features = random_matrix(t_len, dim, &rng);
  utt.labels = std::move(labels);
  return utt;
}

bool params_bit_equal(const LayerStack& a, const LayerStack& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<ParamRef> ra, rb;
    a[i]->append_param_refs("", &ra);
    b[i]->append_param_refs("", &rb);
    if (ra.size() != rb.size()) return false;
    for (std::size_t j = 0; j < ra.size(); ++j)
      if (ra[j].mat->data != rb[j].mat->data) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("single-task model: FF, FF, BiLSTM, BiLSTM, FF, softmax") {
  ModelGraph model = build_single_task({32, 16}, Alphabet::english(), 234, 0.04, 1);
  const auto kinds = kinds_of(model.branch(kTask1).layers);
  CHECK(kinds == std::vector<LayerKind>{LayerKind::kFeedforward, LayerKind::kFeedforward,
                                        LayerKind::kBiLstm, LayerKind::kBiLstm,
                                        LayerKind::kFeedforward, LayerKind::kSoftmaxOutput});
  CHECK(model.shared.empty());
  CHECK(model.branch(kTask1).layers.back()->spec().output_dim == 29);
}

TEST_CASE("single-task parameter count matches the shape arithmetic") {
  const int d = 10, ff = 32, cells = 16, outputs = 29;
  ModelGraph model = build_single_task({ff, cells}, Alphabet::english(), d, 0.04, 1);
  auto ff_params = [](int in, int out) { return out * in + out; };
  auto bilstm_params = [](int in, int h) { return 2 * (4 * h * in + 4 * h * h + 4 * h); };
  const std::size_t expected = ff_params(d, ff) + ff_params(ff, ff) + bilstm_params(ff, cells) +
                               bilstm_params(2 * cells, cells) + ff_params(2 * cells, ff) +
                               ff_params(ff, outputs);
  CHECK(model.params().total_scalars() == expected);
}

TEST_CASE("multitask topology: shared FF,FF,BiLSTM with large or small task2 branch") {
  Alphabet en = Alphabet::english();
  MtlConfig large{0.3, Task2Size::kLarge, Task2Mode::kL1Only};
  ModelGraph big = build_multitask({32, 16}, en, en, large, 234, 0.04, 1);
  CHECK(kinds_of(big.shared) == std::vector<LayerKind>{LayerKind::kFeedforward,
                                                       LayerKind::kFeedforward, LayerKind::kBiLstm});
  CHECK(kinds_of(big.branch(kTask2).layers) ==
        std::vector<LayerKind>{LayerKind::kBiLstm, LayerKind::kFeedforward,
                               LayerKind::kSoftmaxOutput});

  MtlConfig small{0.3, Task2Size::kSmall, Task2Mode::kL1Only};
  ModelGraph little = build_multitask({32, 16}, en, en, small, 234, 0.04, 1);
  CHECK(kinds_of(little.branch(kTask2).layers) ==
        std::vector<LayerKind>{LayerKind::kFeedforward, LayerKind::kSoftmaxOutput});
}

TEST_CASE("the multitask task1 path equals the single-task stack layer for layer") {
  Alphabet en = Alphabet::english();
  ModelGraph single = build_single_task({8, 4}, en, 12, 0.04, 5);
  MtlConfig cfg{0.3, Task2Size::kSmall, Task2Mode::kL1Only};
  ModelGraph mtl = build_multitask({8, 4}, en, en, cfg, 12, 0.04, 5);
  CHECK(single.task_layer_specs(kTask1) == mtl.task_layer_specs(kTask1));
}

TEST_CASE("combined_cost at the paper operating point and boundaries") {
  CHECK(std::abs(combined_cost(2.0, 1.0, 0.3) - 1.7) < 1e-15);
  CHECK(combined_cost(2.0, 1.0, 0.0) == 2.0);
  CHECK(combined_cost(2.0, 1.0, 1.0) == 1.0);
  CHECK_THROWS_WITH_AS(combined_cost(1.0, 1.0, -0.1), doctest::Contains("lambda"), Error);
  CHECK_THROWS_WITH_AS(combined_cost(1.0, 1.0, 1.1), doctest::Contains("lambda"), Error);
}

TEST_CASE("combined_cost is linear in both losses") {
  auto rng = seeded_rng(51, "cc-linear");
  std::uniform_real_distribution<double> unif(0.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = unif(rng), b = unif(rng), c = unif(rng), d = unif(rng), lambda = unif(rng) / 5.0;
    const double lhs = combined_cost(a + c, b + d, lambda);
    const double rhs = combined_cost(a, b, lambda) + combined_cost(c, d, lambda);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("mtl_backward boundaries at lambda 0 and 1") {
  Alphabet en = Alphabet::english();
  MtlConfig cfg{0.3, Task2Size::kSmall, Task2Mode::kL1Only};
  ModelGraph model = build_multitask({6, 3}, en, en, cfg, 5, 0.1, 7);
  std::vector<Utterance> utts1 = {make_utt("u1", 6, 5, {4, 5}, 1), make_utt("u2", 5, 5, {6}, 2)};
  std::vector<Utterance> utts2 = {make_utt("v1", 6, 5, {7, 8}, 3)};
  auto batch1 = as_batch(utts1), batch2 = as_batch(utts2);

  // lambda=0: gradients equal the plain single-task gradient on task1
  MtlBackwardResult at_zero = mtl_backward(model, batch1, batch2, 0.0);
  TaskBackwardResult single = task_backward(model, kTask1, batch1);
  for (std::size_t b = 0; b < at_zero.grads.size(); ++b)
    CHECK(max_abs_diff(at_zero.grads[b], single.grads[b]) == 0.0);
  CHECK(at_zero.total_cost == at_zero.tc1);

  // lambda=1: the task1 branch receives nothing
  MtlBackwardResult at_one = mtl_backward(model, batch1, batch2, 1.0);
  auto [t1_first, t1_last] = model.branch_block_range(kTask1);
  for (std::size_t b = t1_first; b < t1_last; ++b)
    for (double v : at_one.grads[b].data) CHECK(v == 0.0);
}

TEST_CASE("mtl shared gradient is the lambda-weighted sum of per-task gradients") {
  Alphabet en = Alphabet::english();
  MtlConfig cfg{0.3, Task2Size::kLarge, Task2Mode::kL1Only};
  ModelGraph model = build_multitask({6, 3}, en, en, cfg, 5, 0.1, 11);
  std::vector<Utterance> utts1 = {make_utt("u1", 7, 5, {4, 5}, 4), make_utt("u2", 6, 5, {9}, 5)};
  std::vector<Utterance> utts2 = {make_utt("v1", 7, 5, {7}, 6), make_utt("v2", 6, 5, {8, 3}, 7)};
  auto batch1 = as_batch(utts1), batch2 = as_batch(utts2);
  const double lambda = 0.3;

  MtlBackwardResult combined = mtl_backward(model, batch1, batch2, lambda);
  TaskBackwardResult g1 = task_backward(model, kTask1, batch1);
  TaskBackwardResult g2 = task_backward(model, kTask2, batch2);

  auto [shared_first, shared_last] = model.shared_block_range();
  for (std::size_t b = shared_first; b < shared_last; ++b) {
    for (std::size_t i = 0; i < combined.grads[b].data.size(); ++i) {
      const double expected = (1.0 - lambda) * g1.grads[b].data[i] + lambda * g2.grads[b].data[i];
      CHECK(std::abs(combined.grads[b].data[i] - expected) <= 1e-10);
    }
  }
  CHECK(combined.total_cost ==
        doctest::Approx(combined_cost(g1.loss, g2.loss, lambda)).epsilon(1e-12));
}

TEST_CASE("mtl_backward with identical branches averages the shared gradient at lambda 0.5") {
  Alphabet en = Alphabet::english();
  MtlConfig cfg{0.5, Task2Size::kLarge, Task2Mode::kL1Only};
  ModelGraph model = build_multitask({6, 3}, en, en, cfg, 5, 0.1, 13);
  // copy task1 branch parameters into the (same-shaped) task2 branch
  {
    std::vector<ParamRef> r1, r2;
    LayerStack& b1 = model.branch(kTask1).layers;
    LayerStack& b2 = model.branch(kTask2).layers;
    for (std::size_t i = 0; i < b1.size(); ++i) {
      b1[i]->append_param_refs("", &r1);
      b2[i]->append_param_refs("", &r2);
    }
    for (std::size_t i = 0; i < r1.size(); ++i) r2[i].mat->data = r1[i].mat->data;
  }
  std::vector<Utterance> utts = {make_utt("u1", 7, 5, {4, 5}, 8), make_utt("u2", 6, 5, {9}, 9)};
  auto batch = as_batch(utts);

  MtlBackwardResult combined = mtl_backward(model, batch, batch, 0.5);
  TaskBackwardResult single = task_backward(model, kTask1, batch);
  auto [shared_first, shared_last] = model.shared_block_range();
  for (std::size_t b = shared_first; b < shared_last; ++b)
    for (std::size_t i = 0; i < combined.grads[b].data.size(); ++i)
      CHECK(std::abs(combined.grads[b].data[i] - single.grads[b].data[i]) <= 1e-10);
}

TEST_CASE("mtl_backward names the infeasible utterance") {
  Alphabet en = Alphabet::english();
  MtlConfig cfg{0.3, Task2Size::kSmall, Task2Mode::kL1Only};
  ModelGraph model = build_multitask({6, 3}, en, en, cfg, 5, 0.1, 17);
  std::vector<Utterance> utts1 = {make_utt("fits", 6, 5, {4}, 10)};
  std::vector<Utterance> utts2 = {make_utt("too-long-for-T", 2, 5, {7, 7, 8}, 11)};
  auto batch1 = as_batch(utts1), batch2 = as_batch(utts2);
  CHECK_THROWS_WITH_AS(mtl_backward(model, batch1, batch2, 0.3),
                       doctest::Contains("too-long-for-T"), Error);
}

TEST_CASE("truncate_for_pretraining keeps FF,FF,BiLSTM with bit-identical parameters") {
  ModelGraph single = build_single_task({8, 4}, Alphabet::english(), 12, 0.04, 19);
  LayerStack retained = truncate_for_pretraining(single);
  CHECK(kinds_of(retained) == std::vector<LayerKind>{LayerKind::kFeedforward,
                                                     LayerKind::kFeedforward, LayerKind::kBiLstm});
  LayerStack source_prefix;
  for (int i = 0; i < 3; ++i) source_prefix.push_back(single.branch(kTask1).layers[i]->clone());
  CHECK(params_bit_equal(retained, source_prefix));
}

TEST_CASE("attach_new_head restores the baseline topology and leaves the stack untouched") {
  ModelGraph single = build_single_task({8, 4}, Alphabet::english(), 12, 0.04, 23);
  LayerStack retained = truncate_for_pretraining(single);
  LayerStack retained_copy = clone_stack(retained);
  ModelGraph rebuilt = attach_new_head(retained, Alphabet::english(), {8, 4}, 0.04, 99);

  CHECK(rebuilt.task_layer_specs(kTask1) == single.task_layer_specs(kTask1));
  LayerStack rebuilt_prefix;
  for (int i = 0; i < 3; ++i) rebuilt_prefix.push_back(rebuilt.branch(kTask1).layers[i]->clone());
  CHECK(params_bit_equal(rebuilt_prefix, retained_copy));

  // double truncation is shape-idempotent
  LayerStack again = truncate_for_pretraining(rebuilt);
  CHECK(kinds_of(again) == kinds_of(retained_copy));

  // fresh heads differ across seeds
  ModelGraph other = attach_new_head(retained_copy, Alphabet::english(), {8, 4}, 0.04, 100);
  LayerStack head_a, head_b;
  for (int i = 3; i < 6; ++i) {
    head_a.push_back(rebuilt.branch(kTask1).layers[i]->clone());
    head_b.push_back(other.branch(kTask1).layers[i]->clone());
  }
  CHECK(!params_bit_equal(head_a, head_b));
}

TEST_CASE("task_logits validates the feature dimension") {
  ModelGraph model = build_single_task({4, 2}, Alphabet::english(), 6, 0.04, 29);
  CHECK_THROWS_WITH_AS(task_logits(model, kTask1, Matrix(3, 5), nullptr),
                       doctest::Contains("input dim"), Error);
}

TEST_CASE("clone produces an independent bit-identical model") {
  ModelGraph model = build_single_task({4, 2}, Alphabet::english(), 6, 0.04, 31);
  ModelGraph copy = model.clone();
  CHECK(params_bit_equal(model.branch(kTask1).layers, copy.branch(kTask1).layers));
  ParamSet params = copy.params();
  params.set_flat(0, 123.0);
  CHECK(model.params().get_flat(0) != 123.0);
}

TEST_SUITE_END();
