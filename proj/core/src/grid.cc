// ctckit/grid.cc

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

#include "ctckit/grid.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ctckit/error.h"
#include "ctckit/rng.h"

namespace ctckit {

namespace {

GridRow score(const ModelGraph& model, const SynthCorpus& corpus, std::uint64_t seed,
              const std::string& system, const TrainResult& trained, int beam_width) {
  GridRow row;
  row.seed = seed;
  row.system = system;
  row.cer_accented = evaluate_cer(model, kTask1, corpus.accented_test, beam_width).cer;
  row.cer_clean = evaluate_cer(model, kTask1, corpus.lang_a_test, beam_width).cer;
  row.val_loss = trained.best_val_loss;
  row.epochs = trained.epochs_run;
  return row;
}

Dataset concat(const Dataset& a, const Dataset& b) {
  Dataset merged = a;
  merged.utts.insert(merged.utts.end(), b.utts.begin(), b.utts.end());
  return merged;
}

std::string format_cer(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

}  // namespace

GridResult run_experiment_grid(const GridConfig& config) {
  require(!config.seeds.empty(), "run_experiment_grid: no seeds configured");

  GridResult result;
  for (const std::uint64_t seed : config.seeds) {
    const SynthCorpus corpus = generate_synthetic_corpus(config.corpus, seed);
    const int input_dim = config.corpus.feature_dim;

    TrainOptions topts = config.train;
    topts.seed = seed;
    TrainOptions aopts = config.adapt_opts;
    aopts.seed = seed;

    // 1. single-task baseline on clean lang-A
    ModelGraph baseline =
        build_single_task(config.dims, corpus.alphabet, input_dim, config.init_std, seed);
    TrainResult baseline_run =
        train(&baseline, corpus.lang_a_train, corpus.lang_a_dev, nullptr, topts);
    result.rows.push_back(
        score(baseline, corpus, seed, kSystemNames[0], baseline_run, config.beam_width));

    // 2. pre-training: train on lang-B, keep the stack through the first
    //    BiLSTM, attach a fresh head, then train on lang-A
    {
      ModelGraph donor =
          build_single_task(config.dims, corpus.alphabet, input_dim, config.init_std, seed);
      train(&donor, corpus.lang_b_train, corpus.lang_b_dev, nullptr, topts);
      LayerStack retained = truncate_for_pretraining(donor);
      ModelGraph pretrained = attach_new_head(retained, corpus.alphabet, config.dims,
                                              config.init_std, hash_tag(seed, "pretrain-head"));
      pretrained.normalizer = donor.normalizer;
      TrainOptions fine = topts;
      fine.normalize_features = false;  // keep the stats the retained stack was trained with
      TrainResult run = train(&pretrained, corpus.lang_a_train, corpus.lang_a_dev, nullptr, fine);
      result.rows.push_back(
          score(pretrained, corpus, seed, kSystemNames[1], run, config.beam_width));
    }

    // 3.-6. the four multitask variants
    const Dataset bilingual_train = concat(corpus.lang_a_train, corpus.lang_b_train);
    const struct {
      const char* name;
      Task2Size size;
      Task2Mode mode;
    } variants[4] = {
        {kSystemNames[2], Task2Size::kLarge, Task2Mode::kL1Only},
        {kSystemNames[3], Task2Size::kSmall, Task2Mode::kL1Only},
        {kSystemNames[4], Task2Size::kLarge, Task2Mode::kL1PlusL2},
        {kSystemNames[5], Task2Size::kSmall, Task2Mode::kL1PlusL2},
    };
    ModelGraph best_mtl;
    for (const auto& variant : variants) {
      MtlConfig mtl{config.lambda, variant.size, variant.mode};
      ModelGraph model = build_multitask(config.dims, corpus.alphabet, corpus.alphabet, mtl,
                                         input_dim, config.init_std, seed);
      const Dataset& task2_data =
          variant.mode == Task2Mode::kL1Only ? corpus.lang_b_train : bilingual_train;
      TrainOptions mopts = topts;
      mopts.lambda = config.lambda;
      TrainResult run = train(&model, corpus.lang_a_train, corpus.lang_a_dev, &task2_data, mopts);
      result.rows.push_back(score(model, corpus, seed, variant.name, run, config.beam_width));
      if (std::string(variant.name) == kSystemNames[5]) best_mtl = model.clone();
    }

    // 7. adapted baseline, 8. adapted best multitask (both on accented data)
    {
      ModelGraph adapted = baseline.clone();
      TrainResult run = adapt(&adapted, corpus.accented_train, corpus.accented_dev, aopts);
      result.rows.push_back(score(adapted, corpus, seed, kSystemNames[6], run, config.beam_width));
    }
    {
      TrainResult run = adapt(&best_mtl, corpus.accented_train, corpus.accented_dev, aopts);
      result.rows.push_back(score(best_mtl, corpus, seed, kSystemNames[7], run, config.beam_width));
    }
  }

  // Summary table, Tables 2-4 style: one row per system, mean CER over seeds.
  std::string table;
  table += "system                    accented-CER   clean-CER\n";
  table += "------------------------  ------------   ---------\n";
  for (const char* system : kSystemNames) {
    double acc = 0.0, clean = 0.0;
    int n = 0;
    for (const auto& row : result.rows) {
      if (row.system == system) {
        acc += row.cer_accented;
        clean += row.cer_clean;
        ++n;
      }
    }
    if (n == 0) continue;
    char line[128];
    std::snprintf(line, sizeof(line), "%-24s  %12s   %9s\n", system, format_cer(acc / n).c_str(),
                  format_cer(clean / n).c_str());
    table += line;
  }
  result.table = table;
  return result;
}

void write_results_jsonl(const GridResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(bool(out), "write_results_jsonl: cannot open ", path, " for writing");
  for (const auto& row : result.rows) {
    char line[256];
    std::snprintf(line, sizeof(line),
                  "{\"seed\":%llu,\"system\":\"%s\",\"cer_accented\":%.10g,\"cer_clean\":%.10g,"
                  "\"val_loss\":%.10g,\"epochs\":%d}\n",
                  static_cast<unsigned long long>(row.seed), row.system.c_str(), row.cer_accented,
                  row.cer_clean, row.val_loss, row.epochs);
    out << line;
  }
  require(bool(out), "write_results_jsonl: write failed for ", path);
}

double mean_accented_cer(const GridResult& result, const std::string& system) {
  double sum = 0.0;
  int n = 0;
  for (const auto& row : result.rows) {
    if (row.system == system) {
      sum += row.cer_accented;
      ++n;
    }
  }
  require(n > 0, "mean_accented_cer: no rows for system '", system, "'");
  return sum / n;
}

}  // namespace ctckit
