// tests/train_test.cc

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

#include "ctckit/train.h"

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ctckit/checkpoint.h"
#include "ctckit/config.h"
#include "ctckit/error.h"
#include "ctckit/grid.h"
#include "ctckit/synth.h"
#include "test_util.h"

using namespace ctckit;
using namespace ctckit::testing;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("train");

namespace {

SynthSpec tiny_spec() {
  SynthSpec spec;
  spec.n_letters = 4;
  spec.feature_dim = 6;
  spec.train_utts = 10;
  spec.dev_utts = 4;
  spec.test_utts = 4;
  spec.accented_train_utts = 6;
  spec.accented_dev_utts = 3;
  spec.accented_test_utts = 4;
  spec.min_chars = 2;
  spec.max_chars = 4;
  return spec;
}

TrainOptions quick_opts(std::uint64_t seed, int epochs) {
  TrainOptions opts;
  opts.seed = seed;
  opts.max_epochs = epochs;
  opts.batch_size = 8;
  opts.patience = 1000;  // rely on max_epochs unless a test wants early stop
  return opts;
}

LabelSequence parse(const char* text) { return Alphabet::english().parse(text); }

std::vector<double> all_params(ModelGraph* model) {
  ParamSet params = model->params();
  std::vector<double> flat(params.total_scalars());
  for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = params.get_flat(i);
  return flat;
}

}  // namespace

TEST_CASE("cer closed forms") {
  CHECK(cer(parse("abc"), parse("abc")) == 0.0);
  CHECK(cer(parse("abc"), parse("axc")) == doctest::Approx(1.0 / 3));
  CHECK(cer(parse("ab"), parse("")) == 1.0);
  CHECK_THROWS_WITH_AS(cer(parse(""), parse("a")), doctest::Contains("empty reference"), Error);
}

TEST_CASE("cer is symmetric in substitutions for equal-length arguments") {
  auto rng = seeded_rng(71, "cer-sym");
  std::uniform_int_distribution<int> sym(3, 8);
  for (int trial = 0; trial < 25; ++trial) {
    LabelSequence a(6), b(6);
    for (int i = 0; i < 6; ++i) {
      a[i] = sym(rng);
      b[i] = sym(rng);
    }
    CHECK(edit_distance(a, b) == edit_distance(b, a));
    CHECK(cer(a, b) >= 0.0);
  }
}

TEST_CASE("pooled CER is total edits over total reference length, not a mean of rates") {
  // references "abc" and "de", hypotheses "abc" and "dx":
  // pooled = (0 + 1) / (3 + 2) = 1/5, while the mean of rates would be 1/4
  const long long edits = edit_distance(parse("abc"), parse("abc")) +
                          edit_distance(parse("de"), parse("dx"));
  const long long ref_len = 3 + 2;
  CHECK(static_cast<double>(edits) / ref_len == doctest::Approx(0.2));
}

TEST_CASE("checkpoints round trip bit-exactly") {
  Alphabet en = Alphabet::english();
  MtlConfig cfg{0.3, Task2Size::kSmall, Task2Mode::kL1PlusL2};
  ModelGraph model = build_multitask({6, 3}, en, en, cfg, 5, 0.04, 3);
  model.normalizer.mean = {0.1, 0.2, 0.3, 0.4, 0.5};
  model.normalizer.inv_std = {1.0, 2.0, 3.0, 4.0, 5.0};
  ParamSet params = model.params();
  AdamState adam = make_adam_state(params, 0.001);
  auto rng = seeded_rng(72, "ckpt");
  std::vector<Matrix> grads = zeros_like(params);
  for (auto& g : grads)
    for (double& v : g.data) v = std::normal_distribution<double>(0, 1)(rng);
  adam_step(params, grads, &adam);
  TrainingMeta meta{7, 1.25, 42, 3};

  const std::string path = (fs::temp_directory_path() / "ctckit-ckpt-test.ckpt").string();
  save_checkpoint(model, &adam, meta, path);
  Checkpoint loaded = load_checkpoint(path);

  CHECK(loaded.model.topology == Topology::kMultiTask);
  CHECK(loaded.model.input_dim == 5);
  CHECK(loaded.model.branch(kTask2).alphabet == en);
  CHECK(loaded.model.normalizer.mean == model.normalizer.mean);
  ParamSet reloaded = loaded.model.params();
  REQUIRE(reloaded.total_scalars() == params.total_scalars());
  for (std::size_t i = 0; i < params.total_scalars(); ++i)
    CHECK(reloaded.get_flat(i) == params.get_flat(i));
  REQUIRE(loaded.has_adam);
  CHECK(loaded.adam.step_count == 1);
  for (std::size_t b = 0; b < adam.m.size(); ++b) {
    CHECK(loaded.adam.m[b].data == adam.m[b].data);
    CHECK(loaded.adam.v[b].data == adam.v[b].data);
  }
  CHECK(loaded.meta.epoch == 7);
  CHECK(loaded.meta.best_val_loss == 1.25);
  CHECK(loaded.meta.seed == 42);
  fs::remove(path);
}

TEST_CASE("checkpoint loader rejects corruption and version drift") {
  Alphabet en = Alphabet::english();
  ModelGraph model = build_single_task({4, 2}, en, 5, 0.04, 3);
  TrainingMeta meta;
  const std::string path = (fs::temp_directory_path() / "ctckit-ckpt-bad.ckpt").string();
  save_checkpoint(model, nullptr, meta, path);

  // truncation
  {
    std::ifstream in(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::ofstream out(path + ".trunc", std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
  }
  CHECK_THROWS_WITH_AS(load_checkpoint(path + ".trunc"), doctest::Contains("offset"), Error);

  // version bump names both versions
  {
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(8);
    const std::uint32_t v = 3;
    f.write(reinterpret_cast<const char*>(&v), 4);
  }
  try {
    load_checkpoint(path);
    FAIL("expected a version error");
  } catch (const Error& e) {
    const std::string what = e.what();
    CHECK(what.find("version 3") != std::string::npos);
    CHECK(what.find("version 1") != std::string::npos);
  }
  fs::remove(path);
  fs::remove(path + ".trunc");
}

TEST_CASE("lr=0 makes validation flat, so patience=0 stops after epoch 2") {
  SynthCorpus corpus = generate_synthetic_corpus(tiny_spec(), 31);
  ModelGraph model =
      build_single_task({6, 3}, corpus.alphabet, tiny_spec().feature_dim, 0.04, 31);
  TrainOptions opts = quick_opts(31, 50);
  opts.lr = 0.0;
  opts.patience = 0;
  TrainResult result = train(&model, corpus.lang_a_train, corpus.lang_a_dev, nullptr, opts);
  CHECK(result.epochs_run == 2);
  CHECK(result.best_epoch == 1);
}

TEST_CASE("training is deterministic per seed") {
  SynthCorpus corpus = generate_synthetic_corpus(tiny_spec(), 32);
  double first = 0.0;
  for (int run = 0; run < 2; ++run) {
    ModelGraph model =
        build_single_task({6, 3}, corpus.alphabet, tiny_spec().feature_dim, 0.04, 32);
    TrainResult result = train(&model, corpus.lang_a_train, corpus.lang_a_dev, nullptr,
                               quick_opts(32, 4));
    if (run == 0) {
      first = result.best_val_loss;
    } else {
      CHECK(result.best_val_loss == first);
    }
  }
}

TEST_CASE("training reduces the loss on a small corpus") {
  SynthCorpus corpus = generate_synthetic_corpus(tiny_spec(), 33);
  ModelGraph model =
      build_single_task({8, 4}, corpus.alphabet, tiny_spec().feature_dim, 0.04, 33);
  TrainOptions opts = quick_opts(33, 0);
  // estimate the normalizer without training to get a comparable baseline
  TrainResult before = train(&model, corpus.lang_a_train, corpus.lang_a_dev, nullptr, opts);
  opts.max_epochs = 12;
  opts.normalize_features = false;  // keep the stats fixed across the comparison
  TrainResult after = train(&model, corpus.lang_a_train, corpus.lang_a_dev, nullptr, opts);
  CHECK(after.best_val_loss < before.best_val_loss);
}

TEST_CASE("infeasible utterances are skipped with a count, and fully infeasible sets are fatal") {
  SynthCorpus corpus = generate_synthetic_corpus(tiny_spec(), 34);
  Dataset train_set = corpus.lang_a_train;
  // make one utterance infeasible: too few frames for its labels
  train_set.utts[0].features = Matrix(1, tiny_spec().feature_dim);
  ModelGraph model =
      build_single_task({6, 3}, corpus.alphabet, tiny_spec().feature_dim, 0.04, 34);
  std::vector<std::string> warnings;
  TrainOptions opts = quick_opts(34, 1);
  opts.log = [&](const std::string& msg) { warnings.push_back(msg); };
  TrainResult result = train(&model, train_set, corpus.lang_a_dev, nullptr, opts);
  CHECK(result.infeasible_skipped == 1);
  bool named = false;
  for (const auto& w : warnings) named = named || w.find(train_set.utts[0].id) != std::string::npos;
  CHECK(named);

  for (auto& utt : train_set.utts) utt.features = Matrix(1, tiny_spec().feature_dim);
  ModelGraph fresh =
      build_single_task({6, 3}, corpus.alphabet, tiny_spec().feature_dim, 0.04, 34);
  CHECK_THROWS_WITH_AS(train(&fresh, train_set, corpus.lang_a_dev, nullptr, opts),
                       doctest::Contains("infeasible"), Error);
}

TEST_CASE("non-finite parameters abort training before any update") {
  SynthCorpus corpus = generate_synthetic_corpus(tiny_spec(), 35);
  ModelGraph model =
      build_single_task({6, 3}, corpus.alphabet, tiny_spec().feature_dim, 0.04, 35);
  ParamSet params = model.params();
  // poison the output-layer bias so the logits go non-finite
  params.set_flat(params.total_scalars() - 1, std::numeric_limits<double>::infinity());
  CHECK_THROWS_WITH_AS(train(&model, corpus.lang_a_train, corpus.lang_a_dev, nullptr,
                             quick_opts(35, 1)),
                       doctest::Contains("non-finite"), Error);
}

TEST_CASE("a multitask model with task2 disabled reproduces the baseline bit-for-bit") {
  SynthSpec spec = tiny_spec();
  SynthCorpus corpus = generate_synthetic_corpus(spec, 36);

  ModelGraph baseline = build_single_task({6, 3}, corpus.alphabet, spec.feature_dim, 0.04, 36);
  TrainResult r1 = train(&baseline, corpus.lang_a_train, corpus.lang_a_dev, nullptr,
                         quick_opts(36, 3));

  MtlConfig cfg{0.0, Task2Size::kSmall, Task2Mode::kL1Only};
  ModelGraph mtl =
      build_multitask({6, 3}, corpus.alphabet, corpus.alphabet, cfg, spec.feature_dim, 0.04, 36);
  TrainOptions opts = quick_opts(36, 3);
  opts.lambda = 0.0;
  opts.include_task2 = false;
  TrainResult r2 = train(&mtl, corpus.lang_a_train, corpus.lang_a_dev, &corpus.lang_b_train, opts);

  CHECK(r1.best_val_loss == r2.best_val_loss);
  // shared + task1 parameters agree exactly with the single-task model
  ParamSet p1 = baseline.params();
  std::vector<ParamRef> mtl_refs;
  for (std::size_t i = 0; i < mtl.shared.size(); ++i)
    mtl.shared[i]->append_param_refs(str_cat("shared/", i), &mtl_refs);
  for (std::size_t i = 0; i < mtl.branch(kTask1).layers.size(); ++i)
    mtl.branch(kTask1).layers[i]->append_param_refs(str_cat("task1/", i), &mtl_refs);
  ParamSet p2(std::move(mtl_refs));
  REQUIRE(p1.total_scalars() == p2.total_scalars());
  for (std::size_t i = 0; i < p1.total_scalars(); ++i) CHECK(p1.get_flat(i) == p2.get_flat(i));
}

TEST_CASE("evaluate_cer pools edits over the whole set and rejects empty datasets") {
  SynthSpec spec = tiny_spec();
  SynthCorpus corpus = generate_synthetic_corpus(spec, 37);
  ModelGraph model = build_single_task({6, 3}, corpus.alphabet, spec.feature_dim, 0.04, 37);
  train(&model, corpus.lang_a_train, corpus.lang_a_dev, nullptr, quick_opts(37, 2));
  EvalReport report = evaluate_cer(model, kTask1, corpus.lang_a_test, 10);
  long long edits = 0, ref_len = 0;
  for (const auto& row : report.rows) {
    edits += row.edits;
    ref_len += row.ref_len;
  }
  CHECK(report.total_edits == edits);
  CHECK(report.total_ref_len == ref_len);
  CHECK(report.cer == doctest::Approx(static_cast<double>(edits) / ref_len));
  CHECK(report.rows.size() == corpus.lang_a_test.size());

  Dataset empty;
  CHECK_THROWS_WITH_AS(evaluate_cer(model, kTask1, empty, 10), doctest::Contains("empty"), Error);
}

TEST_CASE("adapt with zero epochs leaves the model untouched") {
  SynthSpec spec = tiny_spec();
  SynthCorpus corpus = generate_synthetic_corpus(spec, 38);
  ModelGraph model = build_single_task({6, 3}, corpus.alphabet, spec.feature_dim, 0.04, 38);
  train(&model, corpus.lang_a_train, corpus.lang_a_dev, nullptr, quick_opts(38, 2));
  const std::vector<double> before = all_params(&model);
  TrainOptions opts = quick_opts(38, 0);
  adapt(&model, corpus.accented_train, corpus.accented_dev, opts);
  CHECK(all_params(&model) == before);
}

TEST_CASE("adaptation strictly reduces training loss within 50 epochs") {
  SynthSpec spec = tiny_spec();
  SynthCorpus corpus = generate_synthetic_corpus(spec, 39);
  ModelGraph model = build_single_task({8, 4}, corpus.alphabet, spec.feature_dim, 0.04, 39);
  train(&model, corpus.lang_a_train, corpus.lang_a_dev, nullptr, quick_opts(39, 3));
  const double before = dataset_loss(model, kTask1, corpus.accented_train, nullptr);
  TrainOptions opts = quick_opts(39, 50);
  adapt(&model, corpus.accented_train, corpus.accented_train, opts);
  const double after = dataset_loss(model, kTask1, corpus.accented_train, nullptr);
  CHECK(after < before);
}

TEST_CASE("adapting a multitask model freezes the task2 branch") {
  SynthSpec spec = tiny_spec();
  SynthCorpus corpus = generate_synthetic_corpus(spec, 40);
  MtlConfig cfg{0.3, Task2Size::kSmall, Task2Mode::kL1Only};
  ModelGraph model =
      build_multitask({6, 3}, corpus.alphabet, corpus.alphabet, cfg, spec.feature_dim, 0.04, 40);
  TrainOptions opts = quick_opts(40, 2);
  train(&model, corpus.lang_a_train, corpus.lang_a_dev, &corpus.lang_b_train, opts);

  std::vector<ParamRef> t2_refs;
  for (std::size_t i = 0; i < model.branch(kTask2).layers.size(); ++i)
    model.branch(kTask2).layers[i]->append_param_refs(str_cat("task2/", i), &t2_refs);
  ParamSet t2(std::move(t2_refs));
  std::vector<double> before(t2.total_scalars());
  for (std::size_t i = 0; i < before.size(); ++i) before[i] = t2.get_flat(i);

  TrainOptions aopts = quick_opts(40, 5);
  adapt(&model, corpus.accented_train, corpus.accented_dev, aopts);
  for (std::size_t i = 0; i < before.size(); ++i) CHECK(t2.get_flat(i) == before[i]);
}

TEST_CASE("alphabet mismatches during adaptation are errors") {
  SynthSpec spec = tiny_spec();
  SynthCorpus corpus = generate_synthetic_corpus(spec, 41);
  ModelGraph model = build_single_task({6, 3}, corpus.alphabet, spec.feature_dim, 0.04, 41);
  train(&model, corpus.lang_a_train, corpus.lang_a_dev, nullptr, quick_opts(41, 1));
  Dataset bad = corpus.accented_train;
  bad.utts[0].labels = {corpus.alphabet.size() + 2};  // out of range for the model's alphabet
  TrainOptions opts = quick_opts(41, 2);
  CHECK_THROWS_WITH_AS(adapt(&model, bad, corpus.accented_dev, opts),
                       doctest::Contains("alphabet"), Error);
}

TEST_CASE("grid config parsing applies defaults and rejects unknown keys") {
  GridConfig cfg = parse_grid_config(R"({
    "corpus": {"n_letters": 4, "overlap_fraction": 0.5},
    "model": {"ff_dim": 8, "lstm_cells": 4},
    "train": {"max_epochs": 5, "batch_size": 10},
    "mtl": {"lambda": 0.3},
    "seeds": [1, 2]
  })");
  CHECK(cfg.corpus.n_letters == 4);
  CHECK(cfg.dims.ff_dim == 8);
  CHECK(cfg.train.max_epochs == 5);
  CHECK(cfg.train.lambda == 0.3);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2});

  CHECK_THROWS_WITH_AS(parse_grid_config(R"({"corps": {}})"), doctest::Contains("unknown key"),
                       Error);
  CHECK_THROWS_WITH_AS(parse_grid_config(R"({"train": {"paitence": 3}})"),
                       doctest::Contains("paitence"), Error);
}

TEST_CASE("experiment config parsing mirrors the CLI flags") {
  ExperimentConfig cfg = parse_experiment_config(R"({
    "model": {"ff_dim": 16, "lstm_cells": 8},
    "mtl": {"lambda": 0.4, "task2_size": "large", "task2_mode": "l1l2"},
    "multitask": true,
    "beam_width": 25,
    "alphabet": "en.alpha",
    "train_manifest": "train.tsv",
    "dev_manifest": "dev.tsv",
    "task2_train_manifest": "b.tsv"
  })");
  CHECK(cfg.dims.ff_dim == 16);
  CHECK(cfg.mtl.lambda == 0.4);
  CHECK(cfg.mtl.task2_size == Task2Size::kLarge);
  CHECK(cfg.mtl.task2_mode == Task2Mode::kL1PlusL2);
  CHECK(cfg.multitask);
  CHECK(cfg.beam_width == 25);
  CHECK(cfg.task2_alphabet_path == "en.alpha");
  CHECK_THROWS_AS(parse_task2_size("medium"), Error);
  CHECK_THROWS_AS(parse_task2_mode("l2"), Error);
}

TEST_SUITE_END();
