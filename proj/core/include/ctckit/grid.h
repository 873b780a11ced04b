// ctckit/grid.h

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

#ifndef CTCKIT_GRID_H_
#define CTCKIT_GRID_H_

#include <string>
#include <vector>

#include "ctckit/model.h"
#include "ctckit/synth.h"
#include "ctckit/train.h"

namespace ctckit {

// The whole comparison: baseline, pre-training, the four multitask
// variants, plus both adapted systems, trained per seed on one synthetic
// corpus and scored on the accented and clean test sets.
inline const char* kSystemNames[8] = {
    "single-task",     "pretrained",      "mtl-l1-large",        "mtl-l1-small",
    "mtl-l1l2-large",  "mtl-l1l2-small",  "adapted-single-task", "adapted-mtl-l1l2-small",
};

struct GridConfig {
  SynthSpec corpus;
  ModelDims dims;
  double init_std = 0.04;
  double lambda = 0.3;
  TrainOptions train;       // per-seed runs override .seed and .lambda
  TrainOptions adapt_opts;  // adaptation passes (fewer epochs by default)
  int beam_width = 100;
  std::vector<std::uint64_t> seeds = {1};
};

struct GridRow {
  std::uint64_t seed = 0;
  std::string system;
  double cer_accented = 0.0;
  double cer_clean = 0.0;
  double val_loss = 0.0;
  int epochs = 0;
};

struct GridResult {
  std::vector<GridRow> rows;  // seed-major, system order as in kSystemNames
  std::string table;          // rendered summary
};

GridResult run_experiment_grid(const GridConfig& config);

// One JSON object per line, fixed key order; byte-identical across runs
// with the same seeds.
void write_results_jsonl(const GridResult& result, const std::string& path);

// Mean CER of one system's rows (accented test set).
double mean_accented_cer(const GridResult& result, const std::string& system);

}  // namespace ctckit

#endif  // CTCKIT_GRID_H_
